//! Negation reduction: ν₁ to ν₅ under the restricted structural rules
//! (components of products and sums, bodies of abstractions, operands of negation).

use num_bigint::BigUint;
use num_traits::One;

use crate::expr::{Expr, Path};
use crate::reduce::{neg_axiom, Redex};

/// Children that negation reduction may enter.
pub(crate) fn neg_positions(e: &Expr) -> &'static [usize] {
    match e {
        Expr::Product(..) | Expr::Sum(..) => &[0, 1],
        Expr::UnivAbs(..) | Expr::ExistAbs(..) => &[1],
        Expr::Neg(_) => &[0],
        _ => &[],
    }
}

fn root(e: &Expr) -> Option<(crate::reduce::Axiom, Expr)> {
    match e {
        Expr::Neg(a) => neg_axiom(a),
        _ => None,
    }
}

pub fn neg_redexes(e: &Expr) -> Vec<Redex> {
    fn go(e: &Expr, path: &mut Path, out: &mut Vec<(Path, crate::reduce::Axiom, Expr)>) {
        if let Some((ax, r)) = root(e) {
            out.push((path.clone(), ax, r));
        }
        let kids = e.children();
        for &i in neg_positions(e) {
            path.push(i as u8);
            let mut inner = vec![];
            go(kids[i].1, path, &mut inner);
            out.extend(inner.into_iter().map(|(p, ax, r)| (p, ax, e.with_child(i, r))));
            path.pop();
        }
    }
    let mut out = vec![];
    go(e, &mut vec![], &mut out);
    out.into_iter().map(|(path, axiom, result)| Redex { path, axiom, result }).collect()
}

pub fn neg_step(e: &Expr) -> Option<Redex> {
    fn go(e: &Expr, path: &mut Path) -> Option<(crate::reduce::Axiom, Expr)> {
        if let Some(r) = root(e) {
            return Some(r);
        }
        let kids = e.children();
        for &i in neg_positions(e) {
            path.push(i as u8);
            if let Some((ax, r)) = go(kids[i].1, path) {
                return Some((ax, e.with_child(i, r)));
            }
            path.pop();
        }
        None
    }
    let mut path = vec![];
    go(e, &mut path).map(|(axiom, result)| Redex { path, axiom, result })
}

/// Exhaustive negation reduction; terminates on every input.
pub fn neg_nf(e: &Expr) -> Expr {
    neg_nf_traced(e).0
}

pub fn neg_nf_traced(e: &Expr) -> (Expr, Vec<Redex>) {
    let mut cur = e.clone();
    let mut steps = vec![];
    while let Some(r) = neg_step(&cur) {
        cur = r.result.clone();
        steps.push(r);
    }
    (cur, steps)
}

/// Termination weight: squares at negations, sums plus one elsewhere.
pub fn neg_weight(e: &Expr) -> BigUint {
    match e {
        Expr::Prim | Expr::Var(_) | Expr::Bound(_) => BigUint::one(),
        Expr::Neg(a) => {
            let w = neg_weight(a) + 1u32;
            &w * &w
        }
        _ => e.children().iter().map(|(_, c)| neg_weight(c)).sum::<BigUint>() + 1u32,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr as p;

    #[test]
    fn laws() {
        for (a, b) in [("~~a", "a"), ("~[a,b]", "[~a+~b]"), ("~[x:a][b,c]", "[x!a][~b+~c]")] {
            assert_eq!(neg_nf(&p(a).unwrap()), p(b).unwrap(), "{a}");
        }
    }

    #[test]
    fn does_not_enter_applications_or_touch_tau() {
        let e = p("(f ~~a)").unwrap();
        assert_eq!(neg_nf(&e), e);
        assert_eq!(neg_nf(&p("~tau").unwrap()), p("~tau").unwrap());
    }

    #[test]
    fn weight_decreases() {
        let (_, steps) = neg_nf_traced(&p("~~[x:a][~[b,c] + ~~d]").unwrap());
        let mut prev = neg_weight(&p("~~[x:a][~[b,c] + ~~d]").unwrap());
        for s in steps {
            let w = neg_weight(&s.result);
            assert!(w < prev);
            prev = w;
        }
    }
}
