//! Printer for the ASCII surface syntax. Output reparses to the same term.

use std::collections::BTreeSet;
use std::fmt;

use crate::expr::{free_vars, Expr, Hint};

pub const KEYWORDS: &[&str] = &["tau", "inl", "inr", "case", "context", "def", "check", "axiom"];

pub fn print(e: &Expr) -> String {
    Printer::new(e, false).unary(e)
}

/// Print with every binder hint replaced, so α-equivalent terms print identically.
pub fn print_canonical(e: &Expr) -> String {
    Printer::new(e, true).unary(e)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

struct Printer {
    scope: Vec<String>,
    free: BTreeSet<String>,
    canonical: bool,
}

/// Loose indices of `e` relative to its root.
fn loose_set(e: &Expr, depth: u32, out: &mut BTreeSet<u32>) {
    match e {
        Expr::Bound(k) if *k >= depth => {
            out.insert(k - depth);
        }
        _ => {
            for (under, c) in e.children() {
                loose_set(c, depth + under as u32, out);
            }
        }
    }
}

pub(crate) fn tick(base: &str, n: usize) -> String {
    match n {
        0 => base.to_string(),
        1 => format!("{base}'"),
        _ => format!("{base}'{n}"),
    }
}

impl Printer {
    fn new(e: &Expr, canonical: bool) -> Printer {
        Printer { scope: vec![], free: free_vars(e).iter().map(|n| n.to_string()).collect(), canonical }
    }

    /// Name for a binder whose scoped subterm is `body`.
    fn choose(&self, hint: &Hint, body: &Expr) -> String {
        let base = if self.canonical || hint.is_anon() { "v" } else { hint.as_str() };
        let mut used = BTreeSet::new();
        loose_set(body, 1, &mut used);
        let clashes = |cand: &str| {
            self.free.contains(cand)
                || KEYWORDS.contains(&cand)
                || used
                    .iter()
                    .any(|&k| self.scope.len() > k as usize && self.scope[self.scope.len() - 1 - k as usize] == cand)
        };
        (0..).map(|n| tick(base, n)).find(|c| !clashes(c)).expect("unbounded")
    }

    fn scoped(&mut self, x: String, e: &Expr) -> String {
        self.scope.push(x);
        let s = self.unary(e);
        self.scope.pop();
        s
    }

    fn unary(&mut self, e: &Expr) -> String {
        match e {
            Expr::Neg(a) => format!("~{}", self.unary(a)),
            Expr::UnivAbs(h, a, b) if !(h.is_anon() && !crate::expr::has_loose(b, 0)) => self.binder(':', h, a, b),
            Expr::ExistAbs(h, a, b) => self.binder('!', h, a, b),
            _ => self.postfix(e),
        }
    }

    fn binder(&mut self, sep: char, h: &Hint, a: &Expr, b: &Expr) -> String {
        let x = self.choose(h, b);
        let dom = self.unary(a);
        let body = self.scoped(x.clone(), b);
        format!("[{x}{sep}{dom}]{body}")
    }

    fn is_atomic(e: &Expr) -> bool {
        match e {
            Expr::Neg(_) | Expr::ExistAbs(..) => false,
            Expr::UnivAbs(h, _, b) => h.is_anon() && !crate::expr::has_loose(b, 0),
            _ => true,
        }
    }

    fn postfix(&mut self, e: &Expr) -> String {
        match e {
            Expr::ProjL(a) | Expr::ProjR(a) => {
                let inner = if Self::is_atomic(a) { self.postfix(a) } else { format!("({})", self.unary(a)) };
                let k = if matches!(e, Expr::ProjL(_)) { 1 } else { 2 };
                format!("{inner}.{k}")
            }
            _ => self.atom(e),
        }
    }

    fn atom(&mut self, e: &Expr) -> String {
        match e {
            Expr::Prim => "tau".to_string(),
            Expr::Var(x) => x.to_string(),
            Expr::Bound(k) => {
                let k = *k as usize;
                if k < self.scope.len() {
                    self.scope[self.scope.len() - 1 - k].clone()
                } else {
                    format!("#{k}")
                }
            }
            Expr::UnivAbs(_, a, b) => {
                let dom = self.unary(a);
                let body = self.scoped(String::new(), b);
                format!("[{dom} => {body}]")
            }
            Expr::Appl(..) => {
                let (head, args) = crate::expr::spine(e);
                let mut parts = vec![self.unary(head)];
                for a in args {
                    parts.push(self.unary(a));
                }
                format!("({})", parts.join(" "))
            }
            Expr::ProtDef(h, a, b, c) => {
                let x = self.choose(h, c);
                let w = self.unary(a);
                let p = self.unary(b);
                let t = self.scoped(x.clone(), c);
                format!("<{x}:={w}, {p} : {t}>")
            }
            Expr::Product(a, b) => format!("[{},{}]", self.unary(a), self.unary(b)),
            Expr::Sum(a, b) => format!("[{}+{}]", self.unary(a), self.unary(b)),
            Expr::InjL(a, b) => format!("inl({},{})", self.unary(a), self.unary(b)),
            Expr::InjR(a, b) => format!("inr({},{})", self.unary(a), self.unary(b)),
            Expr::Case(a, b) => format!("case({},{})", self.unary(a), self.unary(b)),
            Expr::Neg(_) | Expr::ExistAbs(..) | Expr::ProjL(_) | Expr::ProjR(_) => {
                format!("({})", self.unary(e))
            }
        }
    }
}
