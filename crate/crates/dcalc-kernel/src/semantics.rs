//! Translations into the untyped λ-calculus with one inert constant, and a
//! normal-order β-reducer for the images.

use std::collections::BTreeSet;
use std::fmt;

use crate::expr::{Expr, Hint, Name};
use crate::reduce::FuelExhausted;

/// Untyped λ-term; bound variables are de Bruijn indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LambdaTerm {
    Const,
    Var(Name),
    Bound(u32),
    Lam(Hint, Box<LambdaTerm>),
    App(Box<LambdaTerm>, Box<LambdaTerm>),
}

use LambdaTerm as L;

pub fn lam(x: &str, body: LambdaTerm) -> LambdaTerm {
    L::Lam(Hint::new(x), Box::new(body))
}

pub fn lapp(f: LambdaTerm, a: LambdaTerm) -> LambdaTerm {
    L::App(Box::new(f), Box::new(a))
}

fn lapps(f: LambdaTerm, args: impl IntoIterator<Item = LambdaTerm>) -> LambdaTerm {
    args.into_iter().fold(f, lapp)
}

pub fn shift(t: &LambdaTerm, d: i64, cutoff: u32) -> LambdaTerm {
    match t {
        L::Bound(k) if *k >= cutoff => L::Bound((*k as i64 + d).try_into().expect("negative de Bruijn index")),
        L::Const | L::Var(_) | L::Bound(_) => t.clone(),
        L::Lam(h, b) => L::Lam(h.clone(), Box::new(shift(b, d, cutoff + 1))),
        L::App(f, a) => lapp(shift(f, d, cutoff), shift(a, d, cutoff)),
    }
}

/// Replaces index `k` by `arg` and lowers the indices above it.
fn instantiate_at(t: &LambdaTerm, arg: &LambdaTerm, k: u32) -> LambdaTerm {
    match t {
        L::Bound(i) if *i == k => shift(arg, k as i64, 0),
        L::Bound(i) if *i > k => L::Bound(i - 1),
        L::Const | L::Var(_) | L::Bound(_) => t.clone(),
        L::Lam(h, b) => L::Lam(h.clone(), Box::new(instantiate_at(b, arg, k + 1))),
        L::App(f, a) => lapp(instantiate_at(f, arg, k), instantiate_at(a, arg, k)),
    }
}

/// `λxy.x`
pub fn first() -> LambdaTerm {
    lam("x", lam("y", L::Bound(1)))
}

/// `λxy.y`
pub fn second() -> LambdaTerm {
    lam("x", lam("y", L::Bound(0)))
}

/// `λx.(x a b)` with `a` and `b` given outside the new binder.
fn pair(a: LambdaTerm, b: LambdaTerm) -> LambdaTerm {
    lam("x", lapps(L::Bound(0), [shift(&a, 1, 0), shift(&b, 1, 0)]))
}

/// `λxy.(sel args..)` where `sel` is `x` (left) or `y` (right); args given outside both binders.
fn tagged(left: bool, args: Vec<LambdaTerm>) -> LambdaTerm {
    let sel = L::Bound(if left { 1 } else { 0 });
    lam("x", lam("y", lapps(sel, args.iter().map(|a| shift(a, 2, 0)))))
}

/// The type-stripping interpretation.
pub fn strip(e: &Expr) -> LambdaTerm {
    match e {
        Expr::Prim => L::Const,
        Expr::Var(x) => L::Var(x.clone()),
        Expr::Bound(k) => L::Bound(*k),
        Expr::UnivAbs(h, _, b) | Expr::ExistAbs(h, _, b) => L::Lam(h.clone(), Box::new(strip(b))),
        Expr::Appl(a, b) => lapp(strip(a), strip(b)),
        Expr::ProtDef(_, a, b, _) | Expr::Product(a, b) | Expr::Sum(a, b) | Expr::Case(a, b) => {
            pair(strip(a), strip(b))
        }
        Expr::ProjL(a) => lapp(strip(a), first()),
        Expr::ProjR(a) => lapp(strip(a), second()),
        Expr::InjL(a, _) => tagged(true, vec![strip(a)]),
        Expr::InjR(_, b) => tagged(false, vec![strip(b)]),
        Expr::Neg(a) => strip(a),
    }
}

/// The type-encoding interpretation: abstractions become domain/body pairs.
pub fn encode(e: &Expr) -> LambdaTerm {
    match e {
        Expr::Prim => L::Const,
        Expr::Var(x) => L::Var(x.clone()),
        Expr::Bound(k) => L::Bound(*k),
        Expr::UnivAbs(h, a, b) | Expr::ExistAbs(h, a, b) => {
            // λy.(y A λx.B): B sits under x, then y.
            let body = L::Lam(h.clone(), Box::new(shift(&encode(b), 1, 1)));
            lam("y", lapps(L::Bound(0), [shift(&encode(a), 1, 0), body]))
        }
        Expr::Appl(a, b) => lapps(encode(a), [second(), encode(b)]),
        Expr::ProtDef(_, a, b, _) | Expr::Product(a, b) | Expr::Sum(a, b) | Expr::Case(a, b) => {
            pair(encode(a), encode(b))
        }
        Expr::ProjL(a) => lapp(encode(a), first()),
        Expr::ProjR(a) => lapp(encode(a), second()),
        Expr::InjL(a, _) => tagged(true, vec![second(), encode(a)]),
        Expr::InjR(_, b) => tagged(false, vec![second(), encode(b)]),
        Expr::Neg(a) => encode(a),
    }
}

/// Leftmost-outermost β-step.
pub fn beta_step(t: &LambdaTerm) -> Option<LambdaTerm> {
    match t {
        L::App(f, a) => {
            if let L::Lam(_, b) = &**f {
                return Some(instantiate_at(b, a, 0));
            }
            if let Some(f2) = beta_step(f) {
                return Some(lapp(f2, (**a).clone()));
            }
            beta_step(a).map(|a2| lapp((**f).clone(), a2))
        }
        L::Lam(h, b) => beta_step(b).map(|b2| L::Lam(h.clone(), Box::new(b2))),
        _ => None,
    }
}

pub fn is_beta_normal(t: &LambdaTerm) -> bool {
    match t {
        L::App(f, a) => !matches!(**f, L::Lam(..)) && is_beta_normal(f) && is_beta_normal(a),
        L::Lam(_, b) => is_beta_normal(b),
        _ => true,
    }
}

/// Normal-order β-normal form.
pub fn beta_nf(t: &LambdaTerm, fuel: u64) -> Result<LambdaTerm, FuelExhausted> {
    let mut cur = t.clone();
    let mut left = fuel;
    while let Some(next) = beta_step(&cur) {
        if left == 0 {
            return Err(FuelExhausted);
        }
        left -= 1;
        cur = next;
    }
    Ok(cur)
}

/// Whether the two terms have the same β-normal form.
pub fn beta_joinable(a: &LambdaTerm, b: &LambdaTerm, fuel: u64) -> Result<bool, FuelExhausted> {
    Ok(a == b || beta_nf(a, fuel)? == beta_nf(b, fuel)?)
}

fn free_names(t: &LambdaTerm, out: &mut BTreeSet<String>) {
    match t {
        L::Var(x) => {
            out.insert(x.to_string());
        }
        L::Lam(_, b) => free_names(b, out),
        L::App(f, a) => {
            free_names(f, out);
            free_names(a, out);
        }
        _ => {}
    }
}

fn uses(t: &LambdaTerm, k: u32) -> BTreeSet<u32> {
    fn go(t: &LambdaTerm, depth: u32, out: &mut BTreeSet<u32>) {
        match t {
            L::Bound(i) if *i >= depth => {
                out.insert(i - depth);
            }
            L::Lam(_, b) => go(b, depth + 1, out),
            L::App(f, a) => {
                go(f, depth, out);
                go(a, depth, out);
            }
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    go(t, k, &mut out);
    out
}

struct Printer {
    free: BTreeSet<String>,
    scope: Vec<String>,
}

impl Printer {
    fn term(&mut self, t: &LambdaTerm, out: &mut String) {
        match t {
            L::Const => out.push_str("pi"),
            L::Var(x) => out.push_str(x),
            L::Bound(k) => match self.scope.len().checked_sub(*k as usize + 1) {
                Some(i) => out.push_str(&self.scope[i]),
                None => out.push_str(&format!("#{k}")),
            },
            L::Lam(h, b) => {
                let base = if h.is_anon() { "v" } else { h.as_str() };
                let used = uses(b, 1);
                let n = self.scope.len();
                let clash = |c: &str| {
                    self.free.contains(c)
                        || c == "pi"
                        || used.iter().any(|&k| n > k as usize && self.scope[n - 1 - k as usize] == c)
                };
                let x = (0..).map(|i| crate::print::tick(base, i)).find(|c| !clash(c)).expect("unbounded");
                out.push('\\');
                out.push_str(&x);
                out.push('.');
                self.scope.push(x);
                self.term(b, out);
                self.scope.pop();
            }
            L::App(..) => {
                let mut spine = vec![];
                let mut head = t;
                while let L::App(f, a) = head {
                    spine.push(&**a);
                    head = f;
                }
                out.push('(');
                self.operand(head, out);
                for a in spine.into_iter().rev() {
                    out.push(' ');
                    self.operand(a, out);
                }
                out.push(')');
            }
        }
    }

    fn operand(&mut self, t: &LambdaTerm, out: &mut String) {
        if matches!(t, L::Lam(..)) {
            out.push('(');
            self.term(t, out);
            out.push(')');
        } else {
            self.term(t, out);
        }
    }
}

impl fmt::Display for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut free = BTreeSet::new();
        free_names(self, &mut free);
        let mut out = String::new();
        Printer { free, scope: vec![] }.term(self, &mut out);
        f.write_str(&out)
    }
}

/// Parses `\x.t`, `λx.t`, `(t t ..)`, `pi` and names. Application binds tighter
/// than abstraction, so `\x.a b` is `\x.(a b)`.
pub fn parse_lambda(src: &str) -> Result<LambdaTerm, String> {
    struct P<'a> {
        chars: Vec<char>,
        pos: usize,
        scope: Vec<String>,
        _src: &'a str,
    }
    impl P<'_> {
        fn ws(&mut self) {
            while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
                self.pos += 1;
            }
        }
        fn peek(&mut self) -> Option<char> {
            self.ws();
            self.chars.get(self.pos).copied()
        }
        fn name(&mut self) -> Result<String, String> {
            self.ws();
            let start = self.pos;
            while self.pos < self.chars.len()
                && (self.chars[self.pos].is_alphanumeric()
                    || self.chars[self.pos] == '\''
                    || self.chars[self.pos] == '_')
            {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(format!("expected a name at {}", self.pos));
            }
            Ok(self.chars[start..self.pos].iter().collect())
        }
        fn term(&mut self) -> Result<LambdaTerm, String> {
            let mut t = self.atom()?;
            while let Some(c) = self.peek() {
                if c == ')' {
                    break;
                }
                let a = self.atom()?;
                t = lapp(t, a);
            }
            Ok(t)
        }
        fn atom(&mut self) -> Result<LambdaTerm, String> {
            match self.peek() {
                Some('\\') | Some('λ') => {
                    self.pos += 1;
                    let x = self.name()?;
                    if self.peek() != Some('.') {
                        return Err(format!("expected `.` at {}", self.pos));
                    }
                    self.pos += 1;
                    self.scope.push(x.clone());
                    let b = self.term();
                    self.scope.pop();
                    Ok(lam(&x, b?))
                }
                Some('(') => {
                    self.pos += 1;
                    let t = self.term()?;
                    if self.peek() != Some(')') {
                        return Err(format!("expected `)` at {}", self.pos));
                    }
                    self.pos += 1;
                    Ok(t)
                }
                Some(_) => {
                    let x = self.name()?;
                    if let Some(i) = self.scope.iter().rposition(|n| *n == x) {
                        Ok(L::Bound((self.scope.len() - 1 - i) as u32))
                    } else if x == "pi" {
                        Ok(L::Const)
                    } else {
                        Ok(L::Var(x.as_str().into()))
                    }
                }
                None => Err("unexpected end of input".into()),
            }
        }
    }
    let mut p = P { chars: src.chars().collect(), pos: 0, scope: vec![], _src: src };
    let t = p.term()?;
    match p.peek() {
        None => Ok(t),
        Some(c) => Err(format!("unexpected `{c}` at {}", p.pos)),
    }
}
