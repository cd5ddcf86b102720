//! Term generators for property testing: valid terms built rule by rule,
//! negation-heavy raw terms, and exhaustive enumerators of small terms.

use std::collections::HashMap;
use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::context::Context;
use crate::esubst::ExprS;
use crate::expr::*;
use crate::reduce::{conv, reduce_nf};
use crate::typing::synth;

const FUEL: u64 = 10_000;

/// Builds valid terms by following the typing rules. Each construction is
/// re-synthesized, so every returned term is valid under the returned context.
pub struct ValidGen<'r, R: Rng> {
    rng: &'r mut R,
    ctx: Context,
    fresh: usize,
}

impl<'r, R: Rng> ValidGen<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        ValidGen { rng, ctx: Context::new(), fresh: 0 }
    }

    fn fresh(&mut self, base: &str) -> String {
        self.fresh += 1;
        format!("{base}{}", self.fresh)
    }

    fn ty_of(&self, e: &Expr) -> Option<Expr> {
        let t = synth(&self.ctx, e, FUEL).ok()?;
        reduce_nf(&t, FUEL).ok()
    }

    fn ok(&self, e: Expr) -> Option<Expr> {
        synth(&self.ctx, &e, FUEL).ok().map(|_| e)
    }

    fn with_local<T>(&mut self, dom: &Expr, f: impl FnOnce(&mut Self, &str) -> T) -> T {
        let x = self.fresh("x");
        let mut ctx = self.ctx.clone();
        ctx.push(name(&x), dom.clone()).expect("fresh name");
        let saved = std::mem::replace(&mut self.ctx, ctx);
        let r = f(self, &x);
        self.ctx = saved;
        r
    }

    fn random_var(&mut self) -> Option<Expr> {
        let names: Vec<Name> = self.ctx.names().cloned().collect();
        names.choose(self.rng).map(|n| Expr::Var(n.clone()))
    }

    /// Random declarations, each valid under the ones before it.
    pub fn context(&mut self, n: usize) -> Context {
        for _ in 0..n {
            let ty = match self.rng.gen_range(0..4) {
                0 | 1 => Some(Expr::Prim),
                2 => self.ty(3),
                _ => self.random_var().and_then(|v| {
                    let t = self.ty_of(&v)?;
                    (t == Expr::Prim).then_some(v)
                }),
            };
            if let Some(ty) = ty {
                let x = self.fresh("c");
                if synth(&self.ctx, &ty, FUEL).is_ok() {
                    self.ctx.push(name(&x), ty).expect("fresh name");
                }
            }
        }
        self.ctx.clone()
    }

    /// A valid term likely to be useful as a type.
    pub fn ty(&mut self, d: usize) -> Option<Expr> {
        if d <= 1 {
            return match self.rng.gen_range(0..3) {
                0 => self.random_var().or(Some(Expr::Prim)),
                _ => Some(Expr::Prim),
            };
        }
        let e = match self.rng.gen_range(0..7) {
            0 => Expr::Prim,
            1 | 2 => {
                let a = self.ty(d - 1)?;
                let (x, b) = self.with_local(&a, |g, x| (x.to_string(), g.ty(d - 1)));
                if self.rng.gen_bool(0.7) {
                    univ(&x, a, b?)
                } else {
                    exist(&x, a, b?)
                }
            }
            3 => product(self.ty(d - 1)?, self.ty(d - 1)?),
            4 => sum(self.ty(d - 1)?, self.ty(d - 1)?),
            5 => neg(self.ty(d - 1)?),
            _ => self.random_var().unwrap_or(Expr::Prim),
        };
        self.ok(e)
    }

    /// A valid term of depth at most `d`.
    pub fn term(&mut self, d: usize) -> Option<Expr> {
        if d <= 1 {
            return if self.rng.gen_bool(0.5) { self.random_var().or(Some(Expr::Prim)) } else { Some(Expr::Prim) };
        }
        let e = match self.rng.gen_range(0..14) {
            0 => return self.term(1),
            1 | 2 => {
                let a = self.ty(d - 1)?;
                let (x, b) = self.with_local(&a, |g, x| (x.to_string(), g.term(d - 1)));
                if self.rng.gen_bool(0.7) {
                    univ(&x, a, b?)
                } else {
                    exist(&x, a, b?)
                }
            }
            3 => {
                let f = self.term(d - 1)?;
                match self.ty_of(&f)? {
                    Expr::UnivAbs(_, c, _) => app(f, self.inhabit(&c, d - 1)?),
                    _ => return None,
                }
            }
            4 => {
                // Explicit beta redex whose body may use the bound variable.
                let a = self.term(d - 2)?;
                let ta = self.ty_of(&a)?;
                let (x, b) = self.with_local(&ta, |g, x| (x.to_string(), g.term(d - 2)));
                let f = if self.rng.gen_bool(0.8) { univ(&x, ta, b?) } else { exist(&x, ta, b?) };
                app(f, a)
            }
            5 => {
                let w = self.term(d - 2)?;
                let tw = self.ty_of(&w)?;
                let (x, tag) = self.with_local(&tw, |g, x| (x.to_string(), g.ty(d - 2)));
                let tag = tag?;
                let inst = reduce_nf(&subst(&tag, &x, &w), FUEL).ok()?;
                let p = self.inhabit(&inst, d - 1)?;
                protdef(&x, w, p, tag)
            }
            6 => {
                let e = self.term(d - 1)?;
                match self.ty_of(&e)? {
                    Expr::ExistAbs(..) | Expr::Product(..) => {
                        if self.rng.gen_bool(0.5) {
                            proj_l(e)
                        } else {
                            proj_r(e)
                        }
                    }
                    _ => return None,
                }
            }
            7 => product(self.term(d - 1)?, self.term(d - 1)?),
            8 => sum(self.term(d - 1)?, self.term(d - 1)?),
            9 => {
                if self.rng.gen_bool(0.5) {
                    inj_l(self.term(d - 1)?, self.ty(d - 1)?)
                } else {
                    inj_r(self.ty(d - 1)?, self.term(d - 1)?)
                }
            }
            10 => {
                let (f, g, _, _) = self.branches(d - 1)?;
                case(f, g)
            }
            11 => {
                // Case applied to an injection.
                let (f, g, a, b) = self.branches(d - 2)?;
                let inj = if self.rng.gen_bool(0.5) {
                    inj_l(self.inhabit(&a, d - 2)?, b)
                } else {
                    inj_r(a, self.inhabit(&b, d - 2)?)
                };
                app(case(f, g), inj)
            }
            12 => neg(self.term(d - 1)?),
            _ => {
                let e = self.term(d - 1)?;
                return self.expand(e, d);
            }
        };
        self.ok(e)
    }

    /// Two abstractions sharing a codomain that does not mention their binders.
    fn branches(&mut self, d: usize) -> Option<(Expr, Expr, Expr, Expr)> {
        let t = reduce_nf(&self.ty(d.saturating_sub(1))?, FUEL).ok()?;
        let a = self.ty(d.saturating_sub(1))?;
        let b = self.ty(d.saturating_sub(1))?;
        let (y, fb) = self.with_local(&a, |g, y| (y.to_string(), g.inhabit(&t, d.saturating_sub(1))));
        let (z, gb) = self.with_local(&b, |g, z| (z.to_string(), g.inhabit(&t, d.saturating_sub(1))));
        Some((univ(&y, a.clone(), fb?), univ(&z, b.clone(), gb?), a, b))
    }

    /// Wraps `e` in a redex whose reduct is `e`, keeping its type.
    fn expand(&mut self, e: Expr, d: usize) -> Option<Expr> {
        if e.depth() + 2 > d {
            return Some(e);
        }
        let junk = || Expr::Prim;
        let out = match self.rng.gen_range(0..5) {
            0 => neg(neg(e)),
            1 => proj_l(product(e, junk())),
            2 => proj_r(product(junk(), e)),
            3 => app(arrow(Expr::Prim, e), junk()),
            _ => {
                let t = self.ty_of(&e)?;
                proj_r(Expr::ProtDef(Hint::new("x"), bx(junk()), bx(e), bx(shift(&t, 1, 0))))
            }
        };
        self.ok(out)
    }

    /// A valid term whose type converts to the normal form `t`.
    pub fn inhabit(&mut self, t: &Expr, d: usize) -> Option<Expr> {
        let matching: Vec<Expr> = self
            .ctx
            .entries()
            .iter()
            .filter(|(_, ty)| conv(ty, t, FUEL).unwrap_or(false))
            .map(|(x, _)| Expr::Var(x.clone()))
            .collect();
        if !matching.is_empty() && (d <= 1 || self.rng.gen_bool(0.4)) {
            return matching.choose(self.rng).cloned();
        }
        if d == 0 {
            return None;
        }
        let e = match t {
            Expr::Prim => match self.rng.gen_range(0..3) {
                0 => neg(Expr::Prim),
                _ => Expr::Prim,
            },
            Expr::UnivAbs(_, c, body) => {
                let c = (**c).clone();
                let (x, b) = self.with_local(&c, |g, x| {
                    let bt = open(body, &name(x));
                    (x.to_string(), g.inhabit(&bt, d - 1))
                });
                univ(&x, c, b?)
            }
            Expr::ExistAbs(_, b, body) => {
                let w = self.inhabit(b, d - 1)?;
                let inst = reduce_nf(&instantiate(body, &w), FUEL).ok()?;
                let p = self.inhabit(&inst, d - 1)?;
                Expr::ProtDef(Hint::new("x"), bx(w), bx(p), body.clone())
            }
            Expr::Product(a, b) => {
                let (l, r) = (self.inhabit(a, d - 1)?, self.inhabit(b, d - 1)?);
                if self.rng.gen_bool(0.5) {
                    product(l, r)
                } else {
                    sum(l, r)
                }
            }
            Expr::Sum(a, b) => {
                if self.rng.gen_bool(0.5) {
                    inj_l(self.inhabit(a, d - 1)?, (**b).clone())
                } else {
                    inj_r((**a).clone(), self.inhabit(b, d - 1)?)
                }
            }
            _ => return matching.choose(self.rng).cloned(),
        };
        let e = self.ok(e)?;
        if self.rng.gen_bool(0.3) {
            self.expand(e, d)
        } else {
            Some(e)
        }
    }
}

/// A random valid term of depth at most `max_depth` with its context.
pub fn gen_valid(rng: &mut impl Rng, max_depth: usize) -> (Context, Expr) {
    loop {
        let mut g = ValidGen::new(rng);
        let n = g.rng.gen_range(0..5);
        let ctx = g.context(n);
        if let Some(e) = g.term(max_depth) {
            if e.depth() <= max_depth && synth(&ctx, &e, FUEL).is_ok() {
                return (ctx, e);
            }
        }
    }
}

/// Raw terms dense in negations, products, sums and abstractions.
pub fn gen_negation_heavy(rng: &mut impl Rng, depth: usize) -> Expr {
    fn go(rng: &mut impl Rng, depth: usize, binders: u32) -> Expr {
        if depth == 0 || rng.gen_bool(0.15) {
            return match rng.gen_range(0..4) {
                0 => Expr::Prim,
                1 if binders > 0 => Expr::Bound(rng.gen_range(0..binders)),
                _ => var(["a", "b", "c"][rng.gen_range(0..3)]),
            };
        }
        let choice = rng.gen_range(0..10);
        let mut sub = |under: bool| go(rng, depth - 1, binders + under as u32);
        match choice {
            0..=3 => neg(sub(false)),
            4 => product(sub(false), sub(false)),
            5 => sum(sub(false), sub(false)),
            6 => Expr::UnivAbs(Hint::new("x"), bx(sub(false)), bx(sub(true))),
            7 => Expr::ExistAbs(Hint::new("x"), bx(sub(false)), bx(sub(true))),
            8 => inj_l(sub(false), sub(false)),
            _ => app(sub(false), sub(false)),
        }
    }
    go(rng, depth, 0)
}

type Table = HashMap<(usize, u32, bool), Rc<Vec<Expr>>>;

/// All closed members of the normal-form set with at most `max_size` nodes.
pub fn enumerate_normal(max_size: usize) -> Vec<Expr> {
    let mut memo = Table::new();
    (1..=max_size).flat_map(|s| normal(&mut memo, s, 0, false).as_ref().clone()).collect()
}

/// `dead` selects dead ends; otherwise the whole normal-form set.
fn normal(memo: &mut Table, s: usize, k: u32, dead: bool) -> Rc<Vec<Expr>> {
    if let Some(v) = memo.get(&(s, k, dead)) {
        return v.clone();
    }
    let mut out = vec![];
    if s == 1 {
        out.extend((0..k).map(Expr::Bound));
        if !dead {
            out.push(Expr::Prim);
        }
    } else if dead {
        // (f a) with f a dead end.
        for sf in 1..s - 1 {
            let fs = normal(memo, sf, k, true);
            let as_ = normal(memo, s - 1 - sf, k, false);
            for f in fs.iter() {
                out.extend(as_.iter().map(|a| app(f.clone(), a.clone())));
            }
        }
        // (case(b,c) a) with a a dead end.
        for sb in 1..s {
            for sc in 1..s {
                if sb + sc + 2 >= s {
                    continue;
                }
                let sa = s - 2 - sb - sc;
                let (bs, cs, as_) = (normal(memo, sb, k, false), normal(memo, sc, k, false), normal(memo, sa, k, true));
                for b in bs.iter() {
                    for c in cs.iter() {
                        out.extend(as_.iter().map(|a| app(case(b.clone(), c.clone()), a.clone())));
                    }
                }
            }
        }
        for a in normal(memo, s - 1, k, true).iter() {
            out.push(proj_l(a.clone()));
            out.push(proj_r(a.clone()));
            if !a.is_neg() {
                out.push(neg(a.clone()));
            }
        }
    } else {
        out.extend(normal(memo, s, k, true).iter().cloned());
        for sa in 1..s - 1 {
            let sb = s - 1 - sa;
            let as_ = normal(memo, sa, k, false);
            let bs = normal(memo, sb, k, false);
            let bodies = normal(memo, sb, k + 1, false);
            for a in as_.iter() {
                for b in bodies.iter() {
                    out.push(Expr::UnivAbs(Hint::new("x"), bx(a.clone()), bx(b.clone())));
                    out.push(Expr::ExistAbs(Hint::new("x"), bx(a.clone()), bx(b.clone())));
                }
                for b in bs.iter() {
                    let (a, b) = (a.clone(), b.clone());
                    out.push(product(a.clone(), b.clone()));
                    out.push(sum(a.clone(), b.clone()));
                    out.push(inj_l(a.clone(), b.clone()));
                    out.push(inj_r(a.clone(), b.clone()));
                    out.push(case(a, b));
                }
            }
        }
        for sa in 1..s {
            for sb in 1..s {
                if sa + sb + 1 >= s {
                    continue;
                }
                let sc = s - 1 - sa - sb;
                let (as_, bs, cs) =
                    (normal(memo, sa, k, false), normal(memo, sb, k, false), normal(memo, sc, k + 1, false));
                for a in as_.iter() {
                    for b in bs.iter() {
                        out.extend(
                            cs.iter()
                                .map(|c| Expr::ProtDef(Hint::new("x"), bx(a.clone()), bx(b.clone()), bx(c.clone()))),
                        );
                    }
                }
            }
        }
    }
    let v = Rc::new(out);
    memo.insert((s, k, dead), v.clone());
    v
}

/// Every explicit-substitution term with at most `max_size` nodes over the
/// leaves `tau`, the free name `a`, and in-scope bound indices.
pub fn enumerate_exprs(max_size: usize) -> Vec<ExprS> {
    let mut memo: HashMap<(usize, u32), Rc<Vec<ExprS>>> = HashMap::new();
    (1..=max_size).flat_map(|s| all_s(&mut memo, s, 0).as_ref().clone()).collect()
}

fn all_s(memo: &mut HashMap<(usize, u32), Rc<Vec<ExprS>>>, s: usize, k: u32) -> Rc<Vec<ExprS>> {
    use ExprS as S;
    if let Some(v) = memo.get(&(s, k)) {
        return v.clone();
    }
    let b = |e: &ExprS| Box::new(e.clone());
    let mut out = vec![];
    if s == 1 {
        out.push(S::Prim);
        out.push(S::Var(name("a")));
        out.extend((0..k).map(S::Bound));
    } else {
        for a in all_s(memo, s - 1, k).iter() {
            out.push(S::ProjL(b(a)));
            out.push(S::ProjR(b(a)));
            out.push(S::Neg(b(a)));
        }
        for sa in 1..s - 1 {
            let sb = s - 1 - sa;
            let as_ = all_s(memo, sa, k);
            let bs = all_s(memo, sb, k);
            let bodies = all_s(memo, sb, k + 1);
            for x in as_.iter() {
                for y in bodies.iter() {
                    out.push(S::UnivAbs(Hint::new("x"), b(x), b(y)));
                    out.push(S::ExistAbs(Hint::new("x"), b(x), b(y)));
                    out.push(S::Subst(Hint::new("x"), b(x), b(y)));
                }
                for y in bs.iter() {
                    out.push(S::Appl(b(x), b(y)));
                    out.push(S::Product(b(x), b(y)));
                    out.push(S::Sum(b(x), b(y)));
                    out.push(S::InjL(b(x), b(y)));
                    out.push(S::InjR(b(x), b(y)));
                    out.push(S::Case(b(x), b(y)));
                }
            }
        }
        for sa in 1..s {
            for sb in 1..s {
                if sa + sb + 1 >= s {
                    continue;
                }
                let sc = s - 1 - sa - sb;
                let (as_, bs, cs) = (all_s(memo, sa, k), all_s(memo, sb, k), all_s(memo, sc, k + 1));
                for x in as_.iter() {
                    for y in bs.iter() {
                        out.extend(cs.iter().map(|z| S::ProtDef(Hint::new("x"), b(x), b(y), b(z))));
                    }
                }
            }
        }
    }
    let v = Rc::new(out);
    memo.insert((s, k), v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::{classify_nf, NfClass};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_terms_are_valid_and_shallow() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut reducible = 0;
        for _ in 0..200 {
            let (ctx, e) = gen_valid(&mut rng, 7);
            assert!(e.depth() <= 7);
            assert!(synth(&ctx, &e, FUEL).is_ok(), "{}", crate::print::print(&e));
            reducible += (classify_nf(&e) == NfClass::Reducible) as usize;
        }
        assert!(reducible > 40, "only {reducible} reducible terms");
    }

    #[test]
    fn enumerated_normal_forms_are_normal_and_closed() {
        let all = enumerate_normal(5);
        assert!(all.iter().all(|e| crate::reduce::in_normal_set(e) && is_locally_closed(e)));
        assert!(all.contains(&Expr::Prim));
        assert!(all.len() > 100);
    }

    #[test]
    fn enumerated_small_terms_have_bounded_size() {
        let all = enumerate_exprs(3);
        assert!(all.iter().all(|e| e.size() <= 3));
        // Leaves, unary of leaves, unary of unary, binders over a leaf, binary over two leaves.
        assert_eq!(all.len(), 2 + 6 + 18 + 2 * 3 * 3 + 6 * 2 * 2);
    }
}
