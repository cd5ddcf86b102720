//! Type synthesis and checking.
//!
//! Binders are opened with fresh free names pushed onto a local stack, so every
//! term handled here is locally closed. Conversion is normalize-and-compare.

use std::fmt;

use thiserror::Error;

use crate::context::Context;
use crate::expr::*;
use crate::print::print;
use crate::reduce::{conv, reduce_nf, FuelExhausted};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeErrorKind {
    UnboundVariable,
    NotAFunction,
    DomainMismatch,
    NotProjectable,
    BranchTypeMismatch,
    InvalidTag,
    FuelExhausted,
    ContextError,
    Mismatch,
}

impl TypeErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            TypeErrorKind::UnboundVariable => "UnboundVariable",
            TypeErrorKind::NotAFunction => "NotAFunction",
            TypeErrorKind::DomainMismatch => "DomainMismatch",
            TypeErrorKind::NotProjectable => "NotProjectable",
            TypeErrorKind::BranchTypeMismatch => "BranchTypeMismatch",
            TypeErrorKind::InvalidTag => "InvalidTag",
            TypeErrorKind::FuelExhausted => "FuelExhausted",
            TypeErrorKind::ContextError => "ContextError",
            TypeErrorKind::Mismatch => "Mismatch",
        }
    }
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("{kind} at {}: {message}", render_path(.path))]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: Path,
    pub message: String,
    pub expected: Option<Box<Expr>>,
    pub found: Option<Box<Expr>>,
    /// Offending declaration for `ContextError`.
    pub decl: Option<Name>,
}

impl TypeError {
    pub fn new(kind: TypeErrorKind, path: &[u8], message: impl Into<String>) -> TypeError {
        TypeError { kind, path: path.to_vec(), message: message.into(), expected: None, found: None, decl: None }
    }

    pub fn fuel() -> TypeError {
        TypeError::new(TypeErrorKind::FuelExhausted, &[], "reduction fuel exhausted")
    }

    fn with(mut self, expected: &Expr, found: &Expr) -> TypeError {
        self.expected = Some(Box::new(expected.clone()));
        self.found = Some(Box::new(found.clone()));
        self
    }
}

impl From<FuelExhausted> for TypeError {
    fn from(_: FuelExhausted) -> TypeError {
        TypeError::fuel()
    }
}

struct Checker<'a> {
    ctx: &'a Context,
    locals: Vec<(Name, Expr)>,
    path: Path,
    fuel: u64,
    tick: usize,
}

impl<'a> Checker<'a> {
    fn new(ctx: &'a Context, fuel: u64) -> Checker<'a> {
        Checker { ctx, locals: vec![], path: vec![], fuel, tick: 0 }
    }

    fn err(&self, kind: TypeErrorKind, msg: impl Into<String>) -> TypeError {
        TypeError::new(kind, &self.path, msg)
    }

    fn lookup(&self, x: &str) -> Option<&Expr> {
        self.locals.iter().rev().find(|(y, _)| &**y == x).map(|(_, t)| t).or_else(|| self.ctx.lookup(x))
    }

    fn fresh(&mut self, hint: &Hint) -> Name {
        let base = if hint.is_anon() { "v" } else { hint.as_str() };
        loop {
            self.tick += 1;
            let cand = name(&format!("{base}'{}", self.tick));
            if self.lookup(&cand).is_none() {
                return cand;
            }
        }
    }

    fn nf(&self, e: &Expr) -> Result<Expr, TypeError> {
        reduce_nf(e, self.fuel).map_err(|_| self.err(TypeErrorKind::FuelExhausted, "reduction fuel exhausted"))
    }

    fn conv(&self, a: &Expr, b: &Expr) -> Result<bool, TypeError> {
        conv(a, b, self.fuel).map_err(|_| self.err(TypeErrorKind::FuelExhausted, "reduction fuel exhausted"))
    }

    fn child(&mut self, i: u8, e: &Expr) -> Result<Expr, TypeError> {
        self.path.push(i);
        let r = self.synth(e);
        self.path.pop();
        r
    }

    /// Synthesizes the type of `body` under a fresh local `x : dom`; the result is closed over `x`.
    fn under(&mut self, i: u8, hint: &Hint, dom: &Expr, body: &Expr) -> Result<Expr, TypeError> {
        let x = self.fresh(hint);
        self.locals.push((x.clone(), dom.clone()));
        let r = self.child(i, &open(body, &x));
        self.locals.pop();
        r.map(|t| close(&t, &x))
    }

    fn synth(&mut self, e: &Expr) -> Result<Expr, TypeError> {
        use Expr::*;
        use TypeErrorKind as K;
        match e {
            Prim => Ok(Prim),
            Var(x) => match self.lookup(x) {
                Some(t) => Ok(t.clone()),
                None => Err(self.err(K::UnboundVariable, format!("unbound variable `{x}`"))),
            },
            Bound(_) => Err(self.err(K::UnboundVariable, "loose bound variable")),
            UnivAbs(h, a, b) | ExistAbs(h, a, b) => {
                self.child(0, a)?;
                let tb = self.under(1, h, a, b)?;
                Ok(UnivAbs(h.clone(), a.clone(), bx(tb)))
            }
            Appl(f, a) => {
                let tf = self.child(0, f)?;
                let tf = self.nf(&tf)?;
                let ta = self.child(1, a)?;
                match &tf {
                    UnivAbs(_, c, d) => {
                        if self.conv(&ta, c)? {
                            Ok(instantiate(d, a))
                        } else {
                            Err(self
                                .err(K::DomainMismatch, format!("argument `{}` has the wrong type", print(a)))
                                .with(c, &ta))
                        }
                    }
                    _ => Err(self
                        .err(K::NotAFunction, format!("`{}` is not a function", print(f)))
                        .with(&arrow_shape(), &tf)),
                }
            }
            ProtDef(h, w, p, tag) => {
                let b = self.child(0, w)?;
                let x = self.fresh(h);
                self.locals.push((x.clone(), b.clone()));
                let tag_ok = self.child(2, &open(tag, &x));
                self.locals.pop();
                tag_ok.map_err(|mut err| {
                    err.kind = K::InvalidTag;
                    err
                })?;
                let tp = self.child(1, p)?;
                let want = instantiate(tag, w);
                if !self.conv(&tp, &want)? {
                    return Err(self.err(K::InvalidTag, "proof does not match the tag").with(&want, &tp));
                }
                Ok(ExistAbs(h.clone(), bx(b), tag.clone()))
            }
            ProjL(a) | ProjR(a) => {
                let t = self.child(0, a)?;
                let t = self.nf(&t)?;
                let left = matches!(e, ProjL(_));
                match &t {
                    ExistAbs(_, b, c) => Ok(if left { (**b).clone() } else { instantiate(c, &proj_l((**a).clone())) }),
                    Product(l, r) => Ok(if left { (**l).clone() } else { (**r).clone() }),
                    _ => Err(self.err(K::NotProjectable, format!("cannot project `{}`", print(a))).with(&Prim, &t)),
                }
            }
            Product(a, b) | Sum(a, b) => Ok(product(self.child(0, a)?, self.child(1, b)?)),
            InjL(a, c) => {
                let ta = self.child(0, a)?;
                self.child(1, c)?;
                Ok(sum(ta, (**c).clone()))
            }
            InjR(c, a) => {
                self.child(0, c)?;
                let ta = self.child(1, a)?;
                Ok(sum((**c).clone(), ta))
            }
            Case(a, b) => {
                let ta = self.child(0, a)?;
                let ta = self.nf(&ta)?;
                let tb = self.child(1, b)?;
                let tb = self.nf(&tb)?;
                match (&ta, &tb) {
                    (UnivAbs(_, c1, d1), UnivAbs(_, c2, d2)) => {
                        if has_loose(d1, 0) || has_loose(d2, 0) || d1 != d2 {
                            return Err(self
                                .err(K::BranchTypeMismatch, "case branches need a common independent codomain")
                                .with(&ta, &tb));
                        }
                        let d = shift(d1, -1, 0);
                        self.synth(&d)?;
                        Ok(UnivAbs(Hint::new("z"), bx(sum((**c1).clone(), (**c2).clone())), bx(shift(&d, 1, 0))))
                    }
                    _ => Err(self.err(K::BranchTypeMismatch, "case branches must be functions").with(&ta, &tb)),
                }
            }
            Neg(a) => self.child(0, a),
        }
    }
}

fn arrow_shape() -> Expr {
    univ("x", var("_"), var("_"))
}

/// The type of `e` under `ctx`, which must already pass [`check_context`].
pub fn synth(ctx: &Context, e: &Expr, fuel: u64) -> Result<Expr, TypeError> {
    if !is_locally_closed(e) {
        return Err(TypeError::new(TypeErrorKind::UnboundVariable, &[], "term has loose bound variables"));
    }
    Checker::new(ctx, fuel).synth(e)
}

pub fn check(ctx: &Context, e: &Expr, ty: &Expr, fuel: u64) -> Result<(), TypeError> {
    let found = synth(ctx, e, fuel)?;
    let (nf_found, nf_want) = (reduce_nf(&found, fuel)?, reduce_nf(ty, fuel)?);
    if nf_found == nf_want {
        Ok(())
    } else {
        Err(TypeError::new(TypeErrorKind::Mismatch, &[], "type mismatch").with(&nf_want, &nf_found))
    }
}

pub fn valid(ctx: &Context, e: &Expr, fuel: u64) -> Result<bool, TypeError> {
    match synth(ctx, e, fuel) {
        Ok(_) => Ok(true),
        Err(err) if err.kind == TypeErrorKind::FuelExhausted => Err(err),
        Err(_) => Ok(false),
    }
}

/// Every declared type must be valid under the declarations before it.
pub fn check_context(ctx: &Context, fuel: u64) -> Result<(), TypeError> {
    let mut prefix = Context::new();
    for (x, t) in ctx.entries() {
        synth(&prefix, t, fuel).map_err(|inner| {
            let mut err = TypeError::new(
                TypeErrorKind::ContextError,
                &inner.path,
                format!("declaration `{x}`: {}", inner.message),
            );
            err.expected = inner.expected;
            err.found = inner.found;
            err.decl = Some(x.clone());
            err
        })?;
        prefix.push(x.clone(), t.clone()).expect("context names are distinct");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_context, parse_expr as p};

    fn ty(ctx: &Context, s: &str) -> Result<Expr, TypeError> {
        synth(ctx, &p(s).unwrap(), 10_000)
    }

    #[test]
    fn named_terms() {
        let e = Context::new();
        assert_eq!(ty(&e, "tau").unwrap(), Expr::Prim);
        assert_eq!(ty(&e, "[x:tau]x").unwrap(), p("[x:tau]tau").unwrap());
        assert_eq!(ty(&e, "[x:tau]tau").unwrap(), p("[x:tau]tau").unwrap());
        let tr = ty(&e, "<x:=tau, tau : ~x>").unwrap();
        assert_eq!(tr, p("[x!tau]~x").unwrap());
        assert!(conv(&tr, &p("~[x:tau]x").unwrap(), 100).unwrap());
        let k = ty(&e, "([x:tau]x [x:tau]tau)").unwrap_err().kind;
        assert!(matches!(k, TypeErrorKind::NotAFunction | TypeErrorKind::DomainMismatch));
    }

    #[test]
    fn protected_definition_checks() {
        let g = parse_context("P:[y:a]b; x:a; z:(P x); a,b:tau").unwrap_or_else(|e| panic!("{e}"));
        let e = p("<y:=x, z : (P y)>").unwrap();
        check(&g, &e, &p("[y!a](P y)").unwrap(), 1000).unwrap();
    }

    #[test]
    fn mismatch_carries_normal_forms() {
        let err = check(&Context::new(), &p("[x:tau]x").unwrap(), &Expr::Prim, 100).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::Mismatch);
        assert_eq!(err.expected, Some(Box::new(Expr::Prim)));
    }

    #[test]
    fn context_validation() {
        let bad = parse_context("x : (y z)").unwrap();
        let err = check_context(&bad, 100).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::ContextError);
        assert_eq!(err.decl.as_deref(), Some("x"));
    }

    #[test]
    fn validity() {
        let e = Context::new();
        assert!(!valid(&e, &p("[x:tau](x x)").unwrap(), 100).unwrap());
        let g = parse_context("p,q:tau; z:[x:p][y:q]tau; w:[x:tau]x").unwrap();
        assert!(valid(&g, &p("[x:p](z x)").unwrap(), 100).unwrap());
        assert!(!valid(&g, &p("[x:p](z p)").unwrap(), 100).unwrap());
    }

    #[test]
    fn case_requires_independent_codomain() {
        let g = parse_context("a,b,c:tau; f:[x:a]c; g:[y:b]c; h:[y:b]y").unwrap();
        assert_eq!(ty(&g, "case(f,g)").unwrap(), p("[[a+b] => c]").unwrap());
        assert_eq!(ty(&g, "case(f,h)").unwrap_err().kind, TypeErrorKind::BranchTypeMismatch);
    }
}
