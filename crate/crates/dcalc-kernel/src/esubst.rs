//! Reduction with explicit substitution, used as an independent oracle for
//! [`crate::reduce`].
//!
//! `[x:=a]b` binds `x` in `b` only. Definitions in scope are tracked as a stack
//! parallel to the binder depth: `None` for ordinary binders, `Some(a)` for
//! internalized substitutions, with `a` relative to its own position.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::context::DuplicateName;
use crate::expr::{Expr, Hint, Name, Path};
use crate::reduce::FuelExhausted;

type B = Box<ExprS>;

fn bx(e: ExprS) -> B {
    Box::new(e)
}

/// [`Expr`] extended with internalized substitution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExprS {
    Prim,
    Var(Name),
    Bound(u32),
    UnivAbs(Hint, B, B),
    ExistAbs(Hint, B, B),
    Appl(B, B),
    ProtDef(Hint, B, B, B),
    ProjL(B),
    ProjR(B),
    Product(B, B),
    Sum(B, B),
    InjL(B, B),
    InjR(B, B),
    Case(B, B),
    Neg(B),
    /// `[x:=a]b`
    Subst(Hint, B, B),
}

use ExprS as S;

impl From<&Expr> for ExprS {
    fn from(e: &Expr) -> ExprS {
        let k = |c: &Expr| bx(ExprS::from(c));
        match e {
            Expr::Prim => S::Prim,
            Expr::Var(x) => S::Var(x.clone()),
            Expr::Bound(i) => S::Bound(*i),
            Expr::UnivAbs(h, a, b) => S::UnivAbs(h.clone(), k(a), k(b)),
            Expr::ExistAbs(h, a, b) => S::ExistAbs(h.clone(), k(a), k(b)),
            Expr::Appl(a, b) => S::Appl(k(a), k(b)),
            Expr::ProtDef(h, a, b, c) => S::ProtDef(h.clone(), k(a), k(b), k(c)),
            Expr::ProjL(a) => S::ProjL(k(a)),
            Expr::ProjR(a) => S::ProjR(k(a)),
            Expr::Product(a, b) => S::Product(k(a), k(b)),
            Expr::Sum(a, b) => S::Sum(k(a), k(b)),
            Expr::InjL(a, b) => S::InjL(k(a), k(b)),
            Expr::InjR(a, b) => S::InjR(k(a), k(b)),
            Expr::Case(a, b) => S::Case(k(a), k(b)),
            Expr::Neg(a) => S::Neg(k(a)),
        }
    }
}

impl From<Expr> for ExprS {
    fn from(e: Expr) -> ExprS {
        ExprS::from(&e)
    }
}

impl ExprS {
    pub fn children(&self) -> Vec<(bool, &ExprS)> {
        match self {
            S::Prim | S::Var(_) | S::Bound(_) => vec![],
            S::UnivAbs(_, a, b) | S::ExistAbs(_, a, b) | S::Subst(_, a, b) => vec![(false, a), (true, b)],
            S::ProtDef(_, a, b, c) => vec![(false, a), (false, b), (true, c)],
            S::ProjL(a) | S::ProjR(a) | S::Neg(a) => vec![(false, a)],
            S::Appl(a, b) | S::Product(a, b) | S::Sum(a, b) | S::InjL(a, b) | S::InjR(a, b) | S::Case(a, b) => {
                vec![(false, a), (false, b)]
            }
        }
    }

    pub fn rebuild(&self, kids: Vec<ExprS>) -> ExprS {
        let mut it = kids.into_iter().map(bx);
        let mut n = || it.next().expect("arity mismatch");
        match self {
            S::Prim | S::Var(_) | S::Bound(_) => self.clone(),
            S::UnivAbs(h, _, _) => S::UnivAbs(h.clone(), n(), n()),
            S::ExistAbs(h, _, _) => S::ExistAbs(h.clone(), n(), n()),
            S::Subst(h, _, _) => S::Subst(h.clone(), n(), n()),
            S::ProtDef(h, _, _, _) => S::ProtDef(h.clone(), n(), n(), n()),
            S::ProjL(_) => S::ProjL(n()),
            S::ProjR(_) => S::ProjR(n()),
            S::Neg(_) => S::Neg(n()),
            S::Appl(_, _) => S::Appl(n(), n()),
            S::Product(_, _) => S::Product(n(), n()),
            S::Sum(_, _) => S::Sum(n(), n()),
            S::InjL(_, _) => S::InjL(n(), n()),
            S::InjR(_, _) => S::InjR(n(), n()),
            S::Case(_, _) => S::Case(n(), n()),
        }
    }

    pub fn with_child(&self, i: usize, new: ExprS) -> ExprS {
        let mut kids: Vec<ExprS> = self.children().into_iter().map(|(_, c)| c.clone()).collect();
        kids[i] = new;
        self.rebuild(kids)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|(_, c)| c.size()).sum::<usize>()
    }

    /// The plain expression, if no internalized substitution remains.
    pub fn to_expr(&self) -> Option<Expr> {
        let k = |c: &ExprS| c.to_expr().map(Box::new);
        Some(match self {
            S::Prim => Expr::Prim,
            S::Var(x) => Expr::Var(x.clone()),
            S::Bound(i) => Expr::Bound(*i),
            S::UnivAbs(h, a, b) => Expr::UnivAbs(h.clone(), k(a)?, k(b)?),
            S::ExistAbs(h, a, b) => Expr::ExistAbs(h.clone(), k(a)?, k(b)?),
            S::Appl(a, b) => Expr::Appl(k(a)?, k(b)?),
            S::ProtDef(h, a, b, c) => Expr::ProtDef(h.clone(), k(a)?, k(b)?, k(c)?),
            S::ProjL(a) => Expr::ProjL(k(a)?),
            S::ProjR(a) => Expr::ProjR(k(a)?),
            S::Product(a, b) => Expr::Product(k(a)?, k(b)?),
            S::Sum(a, b) => Expr::Sum(k(a)?, k(b)?),
            S::InjL(a, b) => Expr::InjL(k(a)?, k(b)?),
            S::InjR(a, b) => Expr::InjR(k(a)?, k(b)?),
            S::Case(a, b) => Expr::Case(k(a)?, k(b)?),
            S::Neg(a) => Expr::Neg(k(a)?),
            S::Subst(..) => return None,
        })
    }
}

pub fn subst_node(x: &str, def: ExprS, body: ExprS) -> ExprS {
    S::Subst(Hint::new(x), bx(def), bx(body))
}

fn map_leaves(e: &ExprS, depth: u32, leaf: &mut impl FnMut(&ExprS, u32) -> ExprS) -> ExprS {
    match e {
        S::Prim => S::Prim,
        S::Var(_) | S::Bound(_) => leaf(e, depth),
        _ => {
            let kids = e.children().into_iter().map(|(under, c)| map_leaves(c, depth + under as u32, leaf)).collect();
            e.rebuild(kids)
        }
    }
}

pub fn shift(e: &ExprS, d: i64, cutoff: u32) -> ExprS {
    if d == 0 {
        return e.clone();
    }
    map_leaves(e, cutoff, &mut |l, c| match l {
        S::Bound(k) if *k >= c => S::Bound((*k as i64 + d).try_into().expect("negative de Bruijn index")),
        _ => l.clone(),
    })
}

pub fn has_loose(e: &ExprS, k: u32) -> bool {
    match e {
        S::Bound(i) => *i == k,
        _ => e.children().iter().any(|(under, c)| has_loose(c, k + *under as u32)),
    }
}

/// Named top-level definitions; each may mention only earlier names.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Env {
    defs: Vec<(Name, ExprS)>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn push(&mut self, x: Name, def: ExprS) -> Result<(), DuplicateName> {
        if self.lookup(&x).is_some() {
            return Err(DuplicateName(x));
        }
        self.defs.push((x, def));
        Ok(())
    }

    pub fn lookup(&self, x: &str) -> Option<&ExprS> {
        self.defs.iter().find(|(y, _)| &**y == x).map(|(_, d)| d)
    }

    /// Definitions declared before `x`.
    fn before(&self, x: &str) -> Env {
        let n = self.defs.iter().position(|(y, _)| &**y == x).unwrap_or(self.defs.len());
        Env { defs: self.defs[..n].to_vec() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MuRule {
    Beta1Mu,
    Beta2Mu,
    Beta3,
    Beta4,
    Use,
    Rem,
    Pi1,
    Pi2,
    Pi3,
    Pi4,
    Pi5,
    Pi6,
    /// A non-empty sequence of negation-reduction steps.
    Nu,
    Nu6,
    Nu7,
    Nu8,
    Nu9,
    Nu10,
}

impl MuRule {
    pub fn name(self) -> &'static str {
        use MuRule::*;
        match self {
            Beta1Mu => "beta1mu",
            Beta2Mu => "beta2mu",
            Beta3 => "beta3",
            Beta4 => "beta4",
            Use => "use",
            Rem => "rem",
            Pi1 => "pi1",
            Pi2 => "pi2",
            Pi3 => "pi3",
            Pi4 => "pi4",
            Pi5 => "pi5",
            Pi6 => "pi6",
            Nu => "nu",
            Nu6 => "nu6",
            Nu7 => "nu7",
            Nu8 => "nu8",
            Nu9 => "nu9",
            Nu10 => "nu10",
        }
    }

    fn is_definitional(self) -> bool {
        matches!(self, MuRule::Use | MuRule::Rem)
    }
}

impl fmt::Display for MuRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuRedex {
    pub path: Path,
    pub rule: MuRule,
    pub result: ExprS,
}

type Scope = Vec<Option<ExprS>>;

fn lookup_bound(scope: &Scope, k: u32) -> Option<ExprS> {
    let i = scope.len().checked_sub(k as usize + 1)?;
    scope[i].as_ref().map(|d| shift(d, k as i64 + 1, 0))
}

/// Definitional axioms at the root: `use` and `rem`.
fn def_root(env: &Env, scope: &Scope, e: &ExprS) -> Option<(MuRule, ExprS)> {
    match e {
        S::Var(x) => env.lookup(x).map(|d| (MuRule::Use, d.clone())),
        S::Bound(k) => lookup_bound(scope, *k).map(|d| (MuRule::Use, d)),
        S::Subst(_, _, b) if !has_loose(b, 0) => Some((MuRule::Rem, shift(b, -1, 0))),
        _ => None,
    }
}

/// Every axiom except the negation rule, in table order.
fn axiom_root(env: &Env, scope: &Scope, e: &ExprS) -> Vec<(MuRule, ExprS)> {
    let mut out = vec![];
    match e {
        S::Appl(f, c) => match &**f {
            S::UnivAbs(h, _, b) => out.push((MuRule::Beta1Mu, S::Subst(h.clone(), c.clone(), b.clone()))),
            S::ExistAbs(h, _, b) => out.push((MuRule::Beta2Mu, S::Subst(h.clone(), c.clone(), b.clone()))),
            S::Case(a, b) => match &**c {
                S::InjL(v, _) => out.push((MuRule::Beta3, S::Appl(a.clone(), v.clone()))),
                S::InjR(_, v) => out.push((MuRule::Beta4, S::Appl(b.clone(), v.clone()))),
                _ => {}
            },
            _ => {}
        },
        S::ProjL(a) => match &**a {
            S::ProtDef(_, w, _, _) => out.push((MuRule::Pi1, (**w).clone())),
            S::Product(l, _) => out.push((MuRule::Pi3, (**l).clone())),
            S::Sum(l, _) => out.push((MuRule::Pi5, (**l).clone())),
            _ => {}
        },
        S::ProjR(a) => match &**a {
            S::ProtDef(_, _, p, _) => out.push((MuRule::Pi2, (**p).clone())),
            S::Product(_, r) => out.push((MuRule::Pi4, (**r).clone())),
            S::Sum(_, r) => out.push((MuRule::Pi6, (**r).clone())),
            _ => {}
        },
        _ => {}
    }
    if let Some(r) = def_root(env, scope, e) {
        out.push(r);
    }
    if let S::Neg(a) = e {
        match &**a {
            S::Prim => out.push((MuRule::Nu6, S::Prim)),
            S::ProtDef(..) => out.push((MuRule::Nu7, (**a).clone())),
            S::InjL(..) => out.push((MuRule::Nu8, (**a).clone())),
            S::InjR(..) => out.push((MuRule::Nu9, (**a).clone())),
            S::Case(..) => out.push((MuRule::Nu10, (**a).clone())),
            _ => {}
        }
    }
    out.sort_by_key(|(r, _)| *r as u8);
    out
}

fn neg_axiom(a: &ExprS) -> Option<ExprS> {
    let n = |e: &B| bx(S::Neg(e.clone()));
    Some(match a {
        S::Neg(b) => (**b).clone(),
        S::Product(l, r) => S::Sum(n(l), n(r)),
        S::Sum(l, r) => S::Product(n(l), n(r)),
        S::UnivAbs(h, d, b) => S::ExistAbs(h.clone(), d.clone(), n(b)),
        S::ExistAbs(h, d, b) => S::UnivAbs(h.clone(), d.clone(), n(b)),
        _ => return None,
    })
}

/// All single negation-reduction steps of `e`.
pub fn neg_steps(e: &ExprS) -> Vec<ExprS> {
    let mut out = vec![];
    if let S::Neg(a) = e {
        out.extend(neg_axiom(a));
    }
    let positions: &[usize] = match e {
        S::Product(..) | S::Sum(..) => &[0, 1],
        S::UnivAbs(..) | S::ExistAbs(..) => &[1],
        S::Neg(_) => &[0],
        _ => &[],
    };
    let kids = e.children();
    for &i in positions {
        for r in neg_steps(kids[i].1) {
            out.push(e.with_child(i, r));
        }
    }
    out
}

/// Everything reachable by one or more negation-reduction steps.
pub fn neg_closure(e: &ExprS) -> Vec<ExprS> {
    let mut seen = HashSet::new();
    let mut out = vec![];
    let mut queue: VecDeque<ExprS> = neg_steps(e).into();
    while let Some(x) = queue.pop_front() {
        if seen.insert(x.clone()) {
            queue.extend(neg_steps(&x));
            out.push(x);
        }
    }
    out
}

fn neg_normal(e: &ExprS) -> ExprS {
    let mut cur = e.clone();
    while let Some(next) = neg_steps(&cur).into_iter().next() {
        cur = next;
    }
    cur
}

fn push_scope(scope: &mut Scope, e: &ExprS, i: usize) -> bool {
    let under = e.children()[i].0;
    if under {
        scope.push(match e {
            S::Subst(_, a, _) => Some((**a).clone()),
            _ => None,
        });
    }
    under
}

/// Every single step under `env`, outermost first, left to right.
pub fn mu_redexes(env: &Env, e: &ExprS) -> Vec<MuRedex> {
    fn go(env: &Env, scope: &mut Scope, e: &ExprS, path: &mut Path, out: &mut Vec<MuRedex>) {
        for (rule, result) in axiom_root(env, scope, e) {
            out.push(MuRedex { path: path.clone(), rule, result });
        }
        for result in neg_closure(e) {
            out.push(MuRedex { path: path.clone(), rule: MuRule::Nu, result });
        }
        for i in 0..e.children().len() {
            let under = push_scope(scope, e, i);
            path.push(i as u8);
            let mut inner = vec![];
            go(env, scope, e.children()[i].1, path, &mut inner);
            out.extend(inner.into_iter().map(|r| MuRedex { result: e.with_child(i, r.result), ..r }));
            path.pop();
            if under {
                scope.pop();
            }
        }
    }
    let mut out = vec![];
    go(env, &mut vec![], e, &mut vec![], &mut out);
    out
}

/// Deterministic step: leftmost-outermost, table order at each node; the negation
/// rule contracts the node to its negation normal form.
pub fn mu_step(env: &Env, e: &ExprS) -> Option<MuRedex> {
    fn root(env: &Env, scope: &Scope, e: &ExprS) -> Option<(MuRule, ExprS)> {
        let mut axioms = axiom_root(env, scope, e).into_iter();
        let first = axioms.next();
        match first {
            Some((r, x)) if (r as u8) < MuRule::Nu as u8 => Some((r, x)),
            other => {
                if !neg_steps(e).is_empty() {
                    Some((MuRule::Nu, neg_normal(e)))
                } else {
                    other
                }
            }
        }
    }
    fn go(env: &Env, scope: &mut Scope, e: &ExprS, path: &mut Path) -> Option<(MuRule, ExprS)> {
        if let Some(r) = root(env, scope, e) {
            return Some(r);
        }
        for i in 0..e.children().len() {
            let under = push_scope(scope, e, i);
            path.push(i as u8);
            let r = go(env, scope, e.children()[i].1, path);
            if under {
                scope.pop();
            }
            if let Some((rule, x)) = r {
                return Some((rule, e.with_child(i, x)));
            }
            path.pop();
        }
        None
    }
    let mut path = vec![];
    go(env, &mut vec![], e, &mut path).map(|(rule, result)| MuRedex { path, rule, result })
}

/// Definition-evaluation steps: `use` and `rem` under all structural rules.
pub fn def_redexes(env: &Env, e: &ExprS) -> Vec<MuRedex> {
    mu_redexes(env, e).into_iter().filter(|r| r.rule.is_definitional()).collect()
}

/// Leftmost-outermost definition-evaluation step.
pub fn def_step(env: &Env, e: &ExprS) -> Option<MuRedex> {
    fn go(env: &Env, scope: &mut Scope, e: &ExprS, path: &mut Path) -> Option<(MuRule, ExprS)> {
        if let Some(r) = def_root(env, scope, e) {
            return Some(r);
        }
        for i in 0..e.children().len() {
            let under = push_scope(scope, e, i);
            path.push(i as u8);
            let r = go(env, scope, e.children()[i].1, path);
            if under {
                scope.pop();
            }
            if let Some((rule, x)) = r {
                return Some((rule, e.with_child(i, x)));
            }
            path.pop();
        }
        None
    }
    let mut path = vec![];
    go(env, &mut vec![], e, &mut path).map(|(rule, result)| MuRedex { path, rule, result })
}

/// Definitional normal form. Always terminates and never contains `[x:=a]b`.
pub fn def_eval_nf(env: &Env, e: &ExprS) -> Expr {
    let mut cur = e.clone();
    while let Some(r) = def_step(env, &cur) {
        cur = r.result;
    }
    cur.to_expr().expect("definition evaluation removes every substitution")
}

/// Maximal deterministic μ-reduction followed by definition evaluation.
pub fn mu_nf(env: &Env, e: &ExprS, fuel: u64) -> Result<Expr, FuelExhausted> {
    let mut cur = e.clone();
    let mut left = fuel;
    while let Some(r) = mu_step(env, &cur) {
        if left == 0 {
            return Err(FuelExhausted);
        }
        left -= 1;
        cur = r.result;
    }
    Ok(def_eval_nf(env, &cur))
}

/// Termination weight for definition evaluation.
pub fn def_weight(env: &Env, e: &ExprS) -> BigUint {
    fn go(env: &Env, scope: &mut Vec<Option<BigUint>>, e: &ExprS) -> BigUint {
        match e {
            S::Prim => BigUint::one(),
            S::Var(x) => match env.lookup(x) {
                Some(d) => def_weight(&env.before(x), d) + 1u32,
                None => BigUint::one(),
            },
            S::Bound(k) => match scope.len().checked_sub(*k as usize + 1).and_then(|i| scope[i].clone()) {
                Some(w) => w + 1u32,
                None => BigUint::one(),
            },
            S::Subst(_, a, b) => {
                let wa = go(env, scope, a);
                scope.push(Some(wa.clone()));
                let wb = go(env, scope, b);
                scope.pop();
                wa + wb + 1u32
            }
            _ => {
                let mut total = BigUint::default();
                for (under, c) in e.children() {
                    if under {
                        scope.push(None);
                    }
                    total += go(env, scope, c);
                    if under {
                        scope.pop();
                    }
                }
                total
            }
        }
    }
    go(env, &mut vec![], e)
}

/// Terms reachable from `e` in at most `n` μ-steps.
pub fn reach(env: &Env, e: &ExprS, n: usize) -> HashSet<ExprS> {
    let mut seen: HashSet<ExprS> = HashSet::from([e.clone()]);
    let mut frontier = vec![e.clone()];
    for _ in 0..n {
        let mut next = vec![];
        for x in &frontier {
            for r in mu_redexes(env, x) {
                if seen.insert(r.result.clone()) {
                    next.push(r.result);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Whether `b` and `c` have a common reduct within `n` steps each.
pub fn joinable(env: &Env, b: &ExprS, c: &ExprS, n: usize) -> bool {
    let rb = reach(env, b, n);
    b == c || reach(env, c, n).iter().any(|x| rb.contains(x))
}

/// A pair of one-step reducts of `e` that have no common reduct within one step each.
pub fn direct_confluence_violation(env: &Env, e: &ExprS) -> Option<(MuRedex, MuRedex)> {
    let rs = mu_redexes(env, e);
    let reaches: Vec<HashSet<ExprS>> = rs.iter().map(|r| reach(env, &r.result, 1)).collect();
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            if !reaches[i].iter().any(|x| reaches[j].contains(x)) {
                return Some((rs[i].clone(), rs[j].clone()));
            }
        }
    }
    None
}

impl fmt::Display for ExprS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &ExprS, names: &mut Vec<String>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let bind = |h: &Hint, names: &Vec<String>| {
                let base = if h.is_anon() { "v" } else { h.as_str() };
                format!("{base}{}", names.len())
            };
            match e {
                S::Prim => f.write_str("tau"),
                S::Var(x) => f.write_str(x),
                S::Bound(k) => match names.len().checked_sub(*k as usize + 1) {
                    Some(i) => f.write_str(&names[i]),
                    None => write!(f, "#{k}"),
                },
                S::UnivAbs(h, a, b) | S::ExistAbs(h, a, b) | S::Subst(h, a, b) => {
                    let x = bind(h, names);
                    let sep = match e {
                        S::UnivAbs(..) => ":",
                        S::ExistAbs(..) => "!",
                        _ => ":=",
                    };
                    write!(f, "[{x}{sep}")?;
                    go(a, names, f)?;
                    f.write_str("]")?;
                    names.push(x);
                    let r = go(b, names, f);
                    names.pop();
                    r
                }
                S::ProtDef(h, a, b, c) => {
                    let x = bind(h, names);
                    write!(f, "<{x}:=")?;
                    go(a, names, f)?;
                    f.write_str(", ")?;
                    go(b, names, f)?;
                    f.write_str(" : ")?;
                    names.push(x);
                    go(c, names, f)?;
                    names.pop();
                    f.write_str(">")
                }
                S::ProjL(a) | S::ProjR(a) => {
                    f.write_str("(")?;
                    go(a, names, f)?;
                    f.write_str(if matches!(e, S::ProjL(_)) { ").1" } else { ").2" })
                }
                S::Neg(a) => {
                    f.write_str("~")?;
                    go(a, names, f)
                }
                S::Appl(a, b) | S::Product(a, b) | S::Sum(a, b) | S::InjL(a, b) | S::InjR(a, b) | S::Case(a, b) => {
                    let (open, sep, close) = match e {
                        S::Appl(..) => ("(", " ", ")"),
                        S::Product(..) => ("[", ",", "]"),
                        S::Sum(..) => ("[", "+", "]"),
                        S::InjL(..) => ("inl(", ",", ")"),
                        S::InjR(..) => ("inr(", ",", ")"),
                        _ => ("case(", ",", ")"),
                    };
                    f.write_str(open)?;
                    go(a, names, f)?;
                    f.write_str(sep)?;
                    go(b, names, f)?;
                    f.write_str(close)
                }
            }
        }
        go(self, &mut vec![], f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;
    use crate::reduce::reduce_nf;

    fn s(src: &str) -> ExprS {
        ExprS::from(&parse_expr(src).unwrap())
    }

    #[test]
    fn beta1mu_internalizes_the_substitution() {
        let rs = mu_redexes(&Env::new(), &s("([x:a]b c)"));
        assert_eq!(rs[0].rule, MuRule::Beta1Mu);
        assert_eq!(rs[0].result, subst_node("x", s("c"), s("b")));
    }

    #[test]
    fn use_and_rem() {
        let mut env = Env::new();
        env.push("x".into(), s("a")).unwrap();
        let rs = mu_redexes(&env, &s("x"));
        assert_eq!((rs[0].rule, rs[0].result.clone()), (MuRule::Use, s("a")));
        let e = subst_node("x", s("a"), s("b"));
        let rs = mu_redexes(&Env::new(), &e);
        assert_eq!((rs[0].rule, rs[0].result.clone()), (MuRule::Rem, s("b")));
    }

    #[test]
    fn definitional_normal_forms() {
        let e = subst_node("x", s("a"), S::Product(bx(S::Bound(0)), bx(s("b"))));
        assert_eq!(def_eval_nf(&Env::new(), &e), parse_expr("[a,b]").unwrap());
        let plain = parse_expr("[x:tau][y,x]").unwrap();
        assert_eq!(def_eval_nf(&Env::new(), &ExprS::from(&plain)), plain);
        // The definition of y mentions a free x that must not be captured by the binder.
        let mut env = Env::new();
        env.push("y".into(), s("x")).unwrap();
        assert_eq!(def_eval_nf(&env, &s("[x:tau][y,x]")), parse_expr("[z:tau][x,z]").unwrap());
    }

    #[test]
    fn mu_normal_forms_match_reduction() {
        for src in ["([x:a]b c)", "tau", "~~[a,b]", "(([y2:a][y:(P y2)](Q y2) x.1) x.2)", "~[x:a][b,c]"] {
            let e = parse_expr(src).unwrap();
            assert_eq!(mu_nf(&Env::new(), &ExprS::from(&e), 1000).unwrap(), reduce_nf(&e, 1000).unwrap(), "{src}");
        }
    }

    #[test]
    fn nu_rule_covers_every_negation_sequence() {
        let results: HashSet<ExprS> = mu_redexes(&Env::new(), &s("~~[a,b]"))
            .into_iter()
            .filter(|r| r.rule == MuRule::Nu && r.path.is_empty())
            .map(|r| r.result)
            .collect();
        for t in ["[a,b]", "~[~a+~b]", "[~~a,~~b]", "[a,~~b]"] {
            assert!(results.contains(&s(t)), "{t}");
        }
    }

    #[test]
    fn weight_decreases_along_definition_evaluation() {
        let e = subst_node(
            "x",
            s("[p,q]"),
            S::Product(bx(S::Bound(0)), bx(subst_node("y", S::Bound(0), S::Appl(bx(S::Bound(0)), bx(S::Bound(1)))))),
        );
        let env = Env::new();
        let mut cur = e;
        while let Some(r) = def_step(&env, &cur) {
            assert!(def_weight(&env, &r.result) < def_weight(&env, &cur), "{}", r.result);
            cur = r.result;
        }
    }

    #[test]
    fn substitution_of_a_double_negation_breaks_direct_confluence() {
        let e = subst_node("x", s("~~tau"), S::Bound(0));
        let (b, c) = direct_confluence_violation(&Env::new(), &e).expect("critical pair");
        assert!(joinable(&Env::new(), &b.result, &c.result, 3));
    }
}
