//! Single-step reduction, normalization, conversion and the normal-form classifier.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::expr::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Beta1,
    Beta2,
    Beta3,
    Beta4,
    Pi1,
    Pi2,
    Pi3,
    Pi4,
    Pi5,
    Pi6,
    Nu1,
    Nu2,
    Nu3,
    Nu4,
    Nu5,
    Nu6,
    Nu7,
    Nu8,
    Nu9,
    Nu10,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        use Axiom::*;
        match self {
            Beta1 => "beta1",
            Beta2 => "beta2",
            Beta3 => "beta3",
            Beta4 => "beta4",
            Pi1 => "pi1",
            Pi2 => "pi2",
            Pi3 => "pi3",
            Pi4 => "pi4",
            Pi5 => "pi5",
            Pi6 => "pi6",
            Nu1 => "nu1",
            Nu2 => "nu2",
            Nu3 => "nu3",
            Nu4 => "nu4",
            Nu5 => "nu5",
            Nu6 => "nu6",
            Nu7 => "nu7",
            Nu8 => "nu8",
            Nu9 => "nu9",
            Nu10 => "nu10",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("reduction fuel exhausted")]
pub struct FuelExhausted;

/// A contracted redex: position, axiom, and the whole term after the step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub path: Path,
    pub axiom: Axiom,
    pub result: Expr,
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {} : {}", self.axiom, render_path(&self.path), self.result)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<Redex>,
}

impl ReductionTrace {
    pub fn last(&self) -> Option<&Expr> {
        self.steps.last().map(|r| &r.result)
    }
}

/// ν₁ to ν₅ at the root of `~a`.
pub(crate) fn neg_axiom(a: &Expr) -> Option<(Axiom, Expr)> {
    use Expr::*;
    Some(match a {
        Neg(b) => (Axiom::Nu1, (**b).clone()),
        Product(l, r) => (Axiom::Nu2, sum(neg((**l).clone()), neg((**r).clone()))),
        Sum(l, r) => (Axiom::Nu3, product(neg((**l).clone()), neg((**r).clone()))),
        UnivAbs(h, d, b) => (Axiom::Nu4, ExistAbs(h.clone(), d.clone(), bx(neg((**b).clone())))),
        ExistAbs(h, d, b) => (Axiom::Nu5, UnivAbs(h.clone(), d.clone(), bx(neg((**b).clone())))),
        _ => return None,
    })
}

/// The axiom applicable at the root of `e`, if any. At most one matches.
pub fn root_step(e: &Expr) -> Option<(Axiom, Expr)> {
    use Expr::*;
    match e {
        Appl(f, c) => match &**f {
            UnivAbs(_, _, b) => Some((Axiom::Beta1, instantiate(b, c))),
            ExistAbs(_, _, b) => Some((Axiom::Beta2, instantiate(b, c))),
            Case(a, b) => match &**c {
                InjL(v, _) => Some((Axiom::Beta3, app((**a).clone(), (**v).clone()))),
                InjR(_, v) => Some((Axiom::Beta4, app((**b).clone(), (**v).clone()))),
                _ => None,
            },
            _ => None,
        },
        ProjL(a) => match &**a {
            ProtDef(_, w, _, _) => Some((Axiom::Pi1, (**w).clone())),
            Product(l, _) => Some((Axiom::Pi3, (**l).clone())),
            Sum(l, _) => Some((Axiom::Pi5, (**l).clone())),
            _ => None,
        },
        ProjR(a) => match &**a {
            ProtDef(_, _, p, _) => Some((Axiom::Pi2, (**p).clone())),
            Product(_, r) => Some((Axiom::Pi4, (**r).clone())),
            Sum(_, r) => Some((Axiom::Pi6, (**r).clone())),
            _ => None,
        },
        Neg(a) => neg_axiom(a).or_else(|| match &**a {
            Prim => Some((Axiom::Nu6, Prim)),
            ProtDef(..) => Some((Axiom::Nu7, (**a).clone())),
            InjL(..) => Some((Axiom::Nu8, (**a).clone())),
            InjR(..) => Some((Axiom::Nu9, (**a).clone())),
            Case(..) => Some((Axiom::Nu10, (**a).clone())),
            _ => None,
        }),
        _ => None,
    }
}

/// Every single step of `e`, outermost first, left to right.
pub fn redexes(e: &Expr) -> Vec<Redex> {
    fn go(e: &Expr, path: &mut Path, out: &mut Vec<Redex>) {
        if let Some((axiom, result)) = root_step(e) {
            out.push(Redex { path: path.clone(), axiom, result });
        }
        for (i, (_, c)) in e.children().into_iter().enumerate() {
            path.push(i as u8);
            let mut inner = vec![];
            go(c, path, &mut inner);
            out.extend(inner.into_iter().map(|r| Redex { result: e.with_child(i, r.result), ..r }));
            path.pop();
        }
    }
    let mut out = vec![];
    go(e, &mut vec![], &mut out);
    out
}

/// Leftmost-outermost step.
pub fn step(e: &Expr) -> Option<Redex> {
    fn go(e: &Expr, path: &mut Path) -> Option<(Axiom, Expr)> {
        if let Some(r) = root_step(e) {
            return Some(r);
        }
        for (i, (_, c)) in e.children().into_iter().enumerate() {
            path.push(i as u8);
            if let Some((ax, r)) = go(c, path) {
                return Some((ax, e.with_child(i, r)));
            }
            path.pop();
        }
        None
    }
    let mut path = vec![];
    go(e, &mut path).map(|(axiom, result)| Redex { path, axiom, result })
}

pub fn is_normal(e: &Expr) -> bool {
    root_step(e).is_none() && e.children().iter().all(|(_, c)| is_normal(c))
}

pub fn reduce_nf(e: &Expr, fuel: u64) -> Result<Expr, FuelExhausted> {
    let mut cur = e.clone();
    let mut left = fuel;
    while let Some(r) = step(&cur) {
        if left == 0 {
            return Err(FuelExhausted);
        }
        left -= 1;
        cur = r.result;
    }
    Ok(cur)
}

/// Leftmost-outermost reduction sequence to normal form.
pub fn trace(e: &Expr, fuel: u64) -> Result<ReductionTrace, FuelExhausted> {
    let mut t = ReductionTrace::default();
    let mut cur = e.clone();
    while let Some(r) = step(&cur) {
        if t.steps.len() as u64 >= fuel {
            return Err(FuelExhausted);
        }
        cur = r.result.clone();
        t.steps.push(r);
    }
    Ok(t)
}

/// Picks a uniformly random redex at every step.
pub fn random_nf(e: &Expr, rng: &mut impl Rng, fuel: u64) -> Result<(Expr, u64), FuelExhausted> {
    let mut cur = e.clone();
    let mut n = 0;
    loop {
        let rs = redexes(&cur);
        if rs.is_empty() {
            return Ok((cur, n));
        }
        if n >= fuel {
            return Err(FuelExhausted);
        }
        n += 1;
        cur = rs[rng.gen_range(0..rs.len())].result.clone();
    }
}

pub fn conv(a: &Expr, b: &Expr, fuel: u64) -> Result<bool, FuelExhausted> {
    if a == b {
        return Ok(true);
    }
    Ok(reduce_nf(a, fuel)? == reduce_nf(b, fuel)?)
}

/// Position of a term relative to the valid normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfClass {
    /// In the normal-form set but not a dead end.
    NormalForm,
    DeadEnd,
    /// Irreducible but outside the normal-form set, such as `(tau tau)`.
    Stuck,
    Reducible,
}

pub fn in_normal_set(e: &Expr) -> bool {
    use Expr::*;
    match e {
        Prim => true,
        UnivAbs(_, a, b) | ExistAbs(_, a, b) => in_normal_set(a) && in_normal_set(b),
        ProtDef(_, a, b, c) => in_normal_set(a) && in_normal_set(b) && in_normal_set(c),
        Product(a, b) | Sum(a, b) | InjL(a, b) | InjR(a, b) | Case(a, b) => in_normal_set(a) && in_normal_set(b),
        _ => in_dead_ends(e),
    }
}

pub fn in_dead_ends(e: &Expr) -> bool {
    use Expr::*;
    match e {
        Var(_) | Bound(_) => true,
        Appl(f, a) => match &**f {
            Case(b, c) => in_normal_set(b) && in_normal_set(c) && in_dead_ends(a),
            _ => in_dead_ends(f) && in_normal_set(a),
        },
        ProjL(a) | ProjR(a) => in_dead_ends(a),
        Neg(a) => !a.is_neg() && in_dead_ends(a),
        _ => false,
    }
}

pub fn classify_nf(e: &Expr) -> NfClass {
    if in_dead_ends(e) {
        NfClass::DeadEnd
    } else if in_normal_set(e) {
        NfClass::NormalForm
    } else if is_normal(e) {
        NfClass::Stuck
    } else {
        NfClass::Reducible
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr as p;

    fn nf(s: &str) -> Expr {
        reduce_nf(&p(s).unwrap(), 1000).unwrap()
    }

    #[test]
    fn beta1_at_root() {
        let rs = redexes(&p("([x:a]b c)").unwrap());
        assert_eq!(rs[0].path, Vec::<u8>::new());
        assert_eq!(rs[0].axiom, Axiom::Beta1);
        assert_eq!(rs[0].result, var("b"));
        assert!(redexes(&Expr::Prim).is_empty());
    }

    #[test]
    fn double_negated_product_has_two_redexes() {
        let rs = redexes(&p("~~[a,b]").unwrap());
        let got: Vec<_> = rs.iter().map(|r| (r.path.clone(), r.axiom, r.result.clone())).collect();
        assert_eq!(
            got,
            vec![(vec![], Axiom::Nu1, p("[a,b]").unwrap()), (vec![0], Axiom::Nu2, p("~[~a+~b]").unwrap()),]
        );
    }

    #[test]
    fn worked_reductions() {
        assert_eq!(nf("(([y2:a][y:(P y2)](Q y2) x.1) x.2)"), p("(Q x.1)").unwrap());
        assert_eq!(nf("([<x:=a,b:c>, d].1).2"), var("b"));
        assert_eq!(nf("~[y:tau]tau"), p("[y!tau]tau").unwrap());
    }

    #[test]
    fn conversion() {
        let a = p("[x:~[a+b]][~a,~b]").unwrap();
        let b = p("[x:[~a,~b]]~[a+b]").unwrap();
        assert!(conv(&a, &b, 1000).unwrap());
        assert!(!conv(&Expr::Prim, &p("[x:tau]x").unwrap(), 1000).unwrap());
    }

    #[test]
    fn classifier() {
        assert_eq!(classify_nf(&p("x.1").unwrap()), NfClass::DeadEnd);
        assert_eq!(classify_nf(&p("<x:=tau,tau:~x>").unwrap()), NfClass::NormalForm);
        assert_eq!(classify_nf(&p("~~x").unwrap()), NfClass::Reducible);
        assert_eq!(classify_nf(&p("(tau tau)").unwrap()), NfClass::Stuck);
    }

    #[test]
    fn fuel_is_enforced() {
        let omega = p("([x:tau](x x) [x:tau](x x))").unwrap();
        assert_eq!(reduce_nf(&omega, 50), Err(FuelExhausted));
    }

    #[test]
    fn trace_renders_one_line_per_step() {
        let t = trace(&p("~[y:tau]tau").unwrap(), 10).unwrap();
        let lines: Vec<String> = t.steps.iter().map(|r| r.to_string()).collect();
        assert_eq!(lines, vec!["nu4 @ root : [y!tau]~tau", "nu6 @ 2 : [y!tau]tau"]);
    }
}
