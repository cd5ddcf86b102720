//! Norms: binary trees over the primitive constant assigned by a partial
//! structural recursion. Every valid term has a norm, and reduction preserves it.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::context::Context;
use crate::expr::Expr;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Norm {
    Leaf,
    Pair(Arc<Norm>, Arc<Norm>),
}

impl Norm {
    pub fn pair(l: Norm, r: Norm) -> Norm {
        Norm::Pair(Arc::new(l), Arc::new(r))
    }

    /// Number of leaves.
    pub fn size(&self) -> usize {
        match self {
            Norm::Leaf => 1,
            Norm::Pair(l, r) => l.size() + r.size(),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Leaf => f.write_str("*"),
            Norm::Pair(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

impl fmt::Debug for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Norming<'a> {
    ctx: &'a Context,
    memo: RefCell<HashMap<usize, Option<Norm>>>,
}

impl<'a> Norming<'a> {
    /// `locals[i]` is the declared type of the binder at depth `i`, relative to its own scope.
    fn norm(&self, limit: usize, locals: &[Expr], e: &Expr) -> Option<Norm> {
        use Expr::*;
        Some(match e {
            Prim => Norm::Leaf,
            Var(x) => {
                let i = self.ctx.position(x).filter(|&i| i < limit)?;
                if let Some(n) = self.memo.borrow().get(&i) {
                    return n.clone();
                }
                let n = self.norm(i, &[], &self.ctx.entries()[i].1);
                self.memo.borrow_mut().insert(i, n.clone());
                return n;
            }
            Bound(k) => {
                let k = *k as usize;
                if k >= locals.len() {
                    return None;
                }
                let at = locals.len() - 1 - k;
                return self.norm(limit, &locals[..at], &locals[at]);
            }
            UnivAbs(_, a, b) | ExistAbs(_, a, b) => {
                let na = self.norm(limit, locals, a)?;
                let nb = self.under(limit, locals, a, b)?;
                Norm::pair(na, nb)
            }
            ProtDef(_, a, b, c) => {
                let na = self.norm(limit, locals, a)?;
                let nb = self.norm(limit, locals, b)?;
                if self.under(limit, locals, a, c)? != nb {
                    return None;
                }
                Norm::pair(na, nb)
            }
            Product(a, b) | Sum(a, b) | InjL(a, b) | InjR(a, b) => {
                Norm::pair(self.norm(limit, locals, a)?, self.norm(limit, locals, b)?)
            }
            Appl(f, a) => match self.norm(limit, locals, f)? {
                Norm::Pair(l, r) if *l == self.norm(limit, locals, a)? => (*r).clone(),
                _ => return None,
            },
            ProjL(a) | ProjR(a) => match self.norm(limit, locals, a)? {
                Norm::Pair(l, r) => {
                    if matches!(e, ProjL(_)) {
                        (*l).clone()
                    } else {
                        (*r).clone()
                    }
                }
                Norm::Leaf => return None,
            },
            Case(a, b) => match (self.norm(limit, locals, a)?, self.norm(limit, locals, b)?) {
                (Norm::Pair(na, c1), Norm::Pair(nb, c2)) if c1 == c2 => Norm::pair(Norm::Pair(na, nb), (*c1).clone()),
                _ => return None,
            },
            Neg(a) => self.norm(limit, locals, a)?,
        })
    }

    fn under(&self, limit: usize, locals: &[Expr], dom: &Expr, body: &Expr) -> Option<Norm> {
        let mut ext = locals.to_vec();
        ext.push(dom.clone());
        self.norm(limit, &ext, body)
    }
}

/// The norm of `e` under `ctx`, or `None` where the recursion is undefined.
pub fn norm(ctx: &Context, e: &Expr) -> Option<Norm> {
    Norming { ctx, memo: RefCell::new(HashMap::new()) }.norm(ctx.len(), &[], e)
}

pub fn normable(ctx: &Context, e: &Expr) -> bool {
    norm(ctx, e).is_some()
}
