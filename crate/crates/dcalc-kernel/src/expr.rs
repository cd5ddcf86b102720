//! Locally nameless expressions.
//!
//! Free variables carry names, bound variables are de Bruijn indices. Binders
//! keep a [`Hint`] for printing only; hints never take part in equality, so
//! structural equality on [`Expr`] is α-equivalence.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// Printing hint for a binder. Compares equal to every other hint.
#[derive(Clone)]
pub struct Hint(pub Name);

impl Hint {
    pub fn new(s: &str) -> Hint {
        Hint(name(s))
    }

    /// Hint used by the `[a => b]` sugar.
    pub fn anon() -> Hint {
        Hint::new("_")
    }

    pub fn is_anon(&self) -> bool {
        &*self.0 == "_"
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

type B = Box<Expr>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Prim,
    Var(Name),
    Bound(u32),
    /// `[x:a]b`
    UnivAbs(Hint, B, B),
    /// `[x!a]b`
    ExistAbs(Hint, B, B),
    /// `(a b)`
    Appl(B, B),
    /// `<x:=a, b : c>`; the binder scopes over the tag only.
    ProtDef(Hint, B, B, B),
    ProjL(B),
    ProjR(B),
    Product(B, B),
    Sum(B, B),
    /// `inl(val, right_tag)`
    InjL(B, B),
    /// `inr(left_tag, val)`
    InjR(B, B),
    Case(B, B),
    Neg(B),
}

use Expr::*;

/// Child position inside a term, 0-based.
pub type Path = Vec<u8>;

pub fn render_path(p: &[u8]) -> String {
    if p.is_empty() {
        "root".to_string()
    } else {
        p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(".")
    }
}

pub fn bx(e: Expr) -> B {
    Box::new(e)
}

// Constructors used throughout the crate and its tests.
pub fn var(s: &str) -> Expr {
    Var(name(s))
}
pub fn app(f: Expr, a: Expr) -> Expr {
    Appl(bx(f), bx(a))
}
pub fn apps(f: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
    args.into_iter().fold(f, app)
}
pub fn neg(e: Expr) -> Expr {
    Neg(bx(e))
}
pub fn product(a: Expr, b: Expr) -> Expr {
    Product(bx(a), bx(b))
}
pub fn sum(a: Expr, b: Expr) -> Expr {
    Sum(bx(a), bx(b))
}
pub fn proj_l(a: Expr) -> Expr {
    ProjL(bx(a))
}
pub fn proj_r(a: Expr) -> Expr {
    ProjR(bx(a))
}
pub fn inj_l(a: Expr, b: Expr) -> Expr {
    InjL(bx(a), bx(b))
}
pub fn inj_r(a: Expr, b: Expr) -> Expr {
    InjR(bx(a), bx(b))
}
pub fn case(a: Expr, b: Expr) -> Expr {
    Case(bx(a), bx(b))
}
/// `[x:dom]body` where `body` mentions the free name `x`.
pub fn univ(x: &str, dom: Expr, body: Expr) -> Expr {
    UnivAbs(Hint::new(x), bx(dom), bx(close(&body, x)))
}
/// `[x!dom]body` where `body` mentions the free name `x`.
pub fn exist(x: &str, dom: Expr, body: Expr) -> Expr {
    ExistAbs(Hint::new(x), bx(dom), bx(close(&body, x)))
}
/// `[dom => body]`
pub fn arrow(dom: Expr, body: Expr) -> Expr {
    UnivAbs(Hint::anon(), bx(dom), bx(shift(&body, 1, 0)))
}
/// `<x:=witness, proof : tag>` where `tag` mentions the free name `x`.
pub fn protdef(x: &str, witness: Expr, proof: Expr, tag: Expr) -> Expr {
    ProtDef(Hint::new(x), bx(witness), bx(proof), bx(close(&tag, x)))
}

impl Expr {
    /// Children in order, each flagged with whether it sits under the node's binder.
    pub fn children(&self) -> Vec<(bool, &Expr)> {
        match self {
            Prim | Var(_) | Bound(_) => vec![],
            UnivAbs(_, a, b) | ExistAbs(_, a, b) => vec![(false, a), (true, b)],
            ProtDef(_, a, b, c) => vec![(false, a), (false, b), (true, c)],
            ProjL(a) | ProjR(a) | Neg(a) => vec![(false, a)],
            Appl(a, b) | Product(a, b) | Sum(a, b) | InjL(a, b) | InjR(a, b) | Case(a, b) => {
                vec![(false, a), (false, b)]
            }
        }
    }

    /// Same constructor with new children; `kids.len()` must match the arity.
    pub fn rebuild(&self, kids: Vec<Expr>) -> Expr {
        let mut it = kids.into_iter().map(bx);
        let mut n = || it.next().expect("arity mismatch");
        match self {
            Prim | Var(_) | Bound(_) => self.clone(),
            UnivAbs(h, _, _) => UnivAbs(h.clone(), n(), n()),
            ExistAbs(h, _, _) => ExistAbs(h.clone(), n(), n()),
            ProtDef(h, _, _, _) => ProtDef(h.clone(), n(), n(), n()),
            ProjL(_) => ProjL(n()),
            ProjR(_) => ProjR(n()),
            Neg(_) => Neg(n()),
            Appl(_, _) => Appl(n(), n()),
            Product(_, _) => Product(n(), n()),
            Sum(_, _) => Sum(n(), n()),
            InjL(_, _) => InjL(n(), n()),
            InjR(_, _) => InjR(n(), n()),
            Case(_, _) => Case(n(), n()),
        }
    }

    /// Replaces the child at `i`.
    pub fn with_child(&self, i: usize, new: Expr) -> Expr {
        let mut kids: Vec<Expr> = self.children().into_iter().map(|(_, c)| c.clone()).collect();
        kids[i] = new;
        self.rebuild(kids)
    }

    pub fn binder_hint(&self) -> Option<&Hint> {
        match self {
            UnivAbs(h, _, _) | ExistAbs(h, _, _) | ProtDef(h, _, _, _) => Some(h),
            _ => None,
        }
    }

    pub fn subterm(&self, path: &[u8]) -> Option<&Expr> {
        let mut cur = self;
        for &i in path {
            cur = cur.children().get(i as usize)?.1;
        }
        Some(cur)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|(_, c)| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|(_, c)| c.depth()).max().unwrap_or(0)
    }

    pub fn is_neg(&self) -> bool {
        matches!(self, Neg(_))
    }
}

/// Rebuilds `e` bottom-up, calling `leaf` on variables with the current binder depth.
fn map_leaves(e: &Expr, depth: u32, leaf: &mut impl FnMut(&Expr, u32) -> Expr) -> Expr {
    match e {
        Prim => Prim,
        Var(_) | Bound(_) => leaf(e, depth),
        _ => {
            let kids = e.children().into_iter().map(|(under, c)| map_leaves(c, depth + under as u32, leaf)).collect();
            e.rebuild(kids)
        }
    }
}

/// Adds `d` to every bound index `>= cutoff`.
pub fn shift(e: &Expr, d: i64, cutoff: u32) -> Expr {
    if d == 0 {
        return e.clone();
    }
    map_leaves(e, cutoff, &mut |l, c| match l {
        Bound(k) if *k >= c => {
            let n = *k as i64 + d;
            assert!(n >= 0, "negative de Bruijn index");
            Bound(n as u32)
        }
        _ => l.clone(),
    })
}

/// Substitutes `arg` for the outermost loose index of `body` and lowers the rest.
pub fn instantiate(body: &Expr, arg: &Expr) -> Expr {
    map_leaves(body, 0, &mut |l, c| match l {
        Bound(k) if *k == c => shift(arg, c as i64, 0),
        Bound(k) if *k > c => Bound(k - 1),
        _ => l.clone(),
    })
}

pub fn open(body: &Expr, x: &Name) -> Expr {
    instantiate(body, &Var(x.clone()))
}

/// Turns the free name `x` into the outermost loose index, raising existing loose indices.
pub fn close(e: &Expr, x: &str) -> Expr {
    map_leaves(e, 0, &mut |l, c| match l {
        Var(y) if &**y == x => Bound(c),
        Bound(k) if *k >= c => Bound(k + 1),
        _ => l.clone(),
    })
}

/// Capture-avoiding `a[x:=b]`.
pub fn subst(a: &Expr, x: &str, b: &Expr) -> Expr {
    map_leaves(a, 0, &mut |l, c| match l {
        Var(y) if &**y == x => shift(b, c as i64, 0),
        _ => l.clone(),
    })
}

/// Simultaneous substitution of free names.
pub fn subst_many(a: &Expr, map: &[(Name, Expr)]) -> Expr {
    map_leaves(a, 0, &mut |l, c| match l {
        Var(y) => match map.iter().find(|(n, _)| n == y) {
            Some((_, b)) => shift(b, c as i64, 0),
            None => l.clone(),
        },
        _ => l.clone(),
    })
}

pub fn free_vars(e: &Expr) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_free(e, &mut out);
    out
}

fn collect_free(e: &Expr, out: &mut BTreeSet<Name>) {
    match e {
        Var(x) => {
            out.insert(x.clone());
        }
        _ => {
            for (_, c) in e.children() {
                collect_free(c, out);
            }
        }
    }
}

pub fn occurs_free(e: &Expr, x: &str) -> bool {
    match e {
        Var(y) => &**y == x,
        _ => e.children().iter().any(|(_, c)| occurs_free(c, x)),
    }
}

/// Whether loose index `k` (relative to the root of `e`) occurs.
pub fn has_loose(e: &Expr, k: u32) -> bool {
    match e {
        Bound(j) => *j == k,
        _ => e.children().iter().any(|(under, c)| has_loose(c, k + *under as u32)),
    }
}

/// Largest loose index plus one, or 0 when `e` is locally closed.
pub fn loose_bound(e: &Expr) -> u32 {
    match e {
        Bound(j) => j + 1,
        _ => e.children().iter().map(|(under, c)| loose_bound(c).saturating_sub(*under as u32)).max().unwrap_or(0),
    }
}

pub fn is_locally_closed(e: &Expr) -> bool {
    loose_bound(e) == 0
}

pub fn alpha_eq(a: &Expr, b: &Expr) -> bool {
    a == b
}

/// Splits an application spine into head and arguments.
pub fn spine(e: &Expr) -> (&Expr, Vec<&Expr>) {
    let mut args = vec![];
    let mut cur = e;
    while let Appl(f, a) = cur {
        args.push(&**a);
        cur = f;
    }
    args.reverse();
    (cur, args)
}
