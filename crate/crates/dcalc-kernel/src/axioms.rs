//! Axiom schemes for negation and casting, realized as generated declarations,
//! and the translation of single-sorted PTS terms through the casting axioms.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::context::Context;
use crate::expr::*;
use crate::print::print_canonical;
use crate::reduce::reduce_nf;
use crate::typing::{synth, TypeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    NegaxPlus,
    NegaxMinus,
    Cast,
    CastIn,
    CastOut,
    DCastIn,
    DCastOut,
}

/// Switchable groups of schemes (`--axioms neg,cast`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Neg,
    Cast,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "neg" => Some(Family::Neg),
            "cast" => Some(Family::Cast),
            _ => None,
        }
    }
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::NegaxPlus,
        Scheme::NegaxMinus,
        Scheme::Cast,
        Scheme::CastIn,
        Scheme::CastOut,
        Scheme::DCastIn,
        Scheme::DCastOut,
    ];

    pub fn surface(self) -> &'static str {
        match self {
            Scheme::NegaxPlus => "negax+",
            Scheme::NegaxMinus => "negax-",
            Scheme::Cast => "cast",
            Scheme::CastIn => "castin",
            Scheme::CastOut => "castout",
            Scheme::DCastIn => "dcastin",
            Scheme::DCastOut => "dcastout",
        }
    }

    /// Prefix of generated identifiers.
    fn ident(self) -> &'static str {
        match self {
            Scheme::NegaxPlus => "negaxP",
            Scheme::NegaxMinus => "negaxM",
            other => other.surface(),
        }
    }

    pub fn from_surface(s: &str) -> Option<Scheme> {
        Scheme::ALL.into_iter().find(|k| k.surface() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            Scheme::Cast | Scheme::CastIn | Scheme::CastOut => 1,
            _ => 2,
        }
    }

    pub fn family(self) -> Family {
        match self {
            Scheme::NegaxPlus | Scheme::NegaxMinus => Family::Neg,
            _ => Family::Cast,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.surface())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomError {
    #[error("axiom scheme `{0}` expects {1} indices, got {2}")]
    Arity(Scheme, usize, usize),
    #[error("axiom index of `{0}` mentions a bound variable")]
    BoundIndex(Scheme),
    #[error("axiom `{0}` refers to undeclared name `{1}`")]
    OpenIndex(Name, Name),
    #[error("axiom indices are cyclic at `{0}`")]
    CyclicIndices(Name),
    #[error("axiom scheme `{0}` is not enabled")]
    Disabled(Scheme),
    #[error("duplicate declaration of `{0}`")]
    Duplicate(Name),
}

/// One instance of an axiom scheme.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AxiomRequest {
    pub scheme: Scheme,
    pub indices: Vec<Expr>,
}

fn binder(exist: bool, hint: &str, tmp: &str, dom: Expr, body: Expr) -> Expr {
    let (h, d, b) = (Hint::new(hint), bx(dom), bx(close(&body, tmp)));
    if exist {
        Expr::ExistAbs(h, d, b)
    } else {
        Expr::UnivAbs(h, d, b)
    }
}

impl AxiomRequest {
    pub fn new(scheme: Scheme, indices: Vec<Expr>) -> Result<AxiomRequest, AxiomError> {
        if indices.len() != scheme.arity() {
            return Err(AxiomError::Arity(scheme, scheme.arity(), indices.len()));
        }
        if !indices.iter().all(is_locally_closed) {
            return Err(AxiomError::BoundIndex(scheme));
        }
        Ok(AxiomRequest { scheme, indices })
    }

    fn with(scheme: Scheme, indices: &[Expr]) -> AxiomRequest {
        AxiomRequest { scheme, indices: indices.to_vec() }
    }

    /// Generated variable name; depends only on the scheme and the α-class of the indices.
    pub fn name(&self) -> Name {
        let mut h = Sha256::new();
        h.update(self.scheme.surface().as_bytes());
        for i in &self.indices {
            h.update(b"\x00");
            h.update(print_canonical(i).as_bytes());
        }
        let digest = h.finalize();
        let hex: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
        crate::expr::name(&format!("{}_{}", self.scheme.ident(), hex))
    }

    /// Instances this one's type mentions.
    pub fn deps(&self) -> Vec<AxiomRequest> {
        let a = &self.indices[..1];
        match self.scheme {
            Scheme::CastIn | Scheme::CastOut => vec![AxiomRequest::with(Scheme::Cast, a)],
            Scheme::DCastIn | Scheme::DCastOut => {
                vec![AxiomRequest::with(Scheme::CastOut, a), AxiomRequest::with(Scheme::CastIn, a)]
            }
            _ => vec![],
        }
    }

    /// The scheme's template with the indices substituted.
    pub fn ty(&self) -> Expr {
        let a = self.indices[0].clone();
        let sub = |s: Scheme| Expr::Var(AxiomRequest::with(s, &self.indices[..1]).name());
        let (x, y, z) = (var("#x"), var("#y"), var("#z"));
        match self.scheme {
            Scheme::NegaxPlus => {
                let b = self.indices[1].clone();
                arrow(sum(a.clone(), b.clone()), arrow(neg(a), b))
            }
            Scheme::NegaxMinus => {
                let b = self.indices[1].clone();
                arrow(arrow(neg(a.clone()), b.clone()), sum(a, b))
            }
            Scheme::Cast => arrow(a, Expr::Prim),
            Scheme::CastIn => binder(false, "x", "#x", a, arrow(x.clone(), app(sub(Scheme::Cast), x))),
            Scheme::CastOut => binder(false, "x", "#x", a, arrow(app(sub(Scheme::Cast), x.clone()), x)),
            Scheme::DCastIn | Scheme::DCastOut => {
                let b = self.indices[1].clone();
                let roundtrip =
                    apps(sub(Scheme::CastOut), [x.clone(), apps(sub(Scheme::CastIn), [x.clone(), z.clone()])]);
                let (lhs, rhs) = (app(y.clone(), z.clone()), app(y.clone(), roundtrip));
                let body = if self.scheme == Scheme::DCastIn { arrow(lhs, rhs) } else { arrow(rhs, lhs) };
                binder(
                    false,
                    "x",
                    "#x",
                    a,
                    binder(false, "y", "#y", arrow(x.clone(), b), binder(false, "z", "#z", x, body)),
                )
            }
        }
    }

    pub fn render(&self) -> String {
        let idx: Vec<String> = self.indices.iter().map(crate::print::print).collect();
        format!("{}{{{}}}", self.scheme, idx.join(","))
    }
}

/// Adds every instance the requested ones depend on; order of first appearance, deduplicated.
pub fn close_requests(reqs: &[AxiomRequest]) -> Vec<AxiomRequest> {
    let mut out: Vec<AxiomRequest> = vec![];
    let mut seen = BTreeSet::new();
    let mut stack: Vec<AxiomRequest> = reqs.iter().rev().cloned().collect();
    while let Some(r) = stack.pop() {
        if seen.insert(r.name()) {
            stack.extend(r.deps().into_iter().rev());
            out.push(r);
        }
    }
    out
}

pub fn check_enabled(reqs: &[AxiomRequest], enabled: &BTreeSet<Family>) -> Result<(), AxiomError> {
    match reqs.iter().find(|r| !enabled.contains(&r.scheme.family())) {
        Some(r) => Err(AxiomError::Disabled(r.scheme)),
        None => Ok(()),
    }
}

/// A prefix context declaring every requested instance, each after the instances it mentions.
pub fn instantiate_axioms(reqs: &[AxiomRequest]) -> Result<Context, AxiomError> {
    weave(&Context::new(), reqs)
}

/// Interleaves instances with `user`, placing each right after the last declaration it mentions.
pub fn weave(user: &Context, reqs: &[AxiomRequest]) -> Result<Context, AxiomError> {
    let mut pending: Vec<(Name, Expr, BTreeSet<Name>)> = close_requests(reqs)
        .into_iter()
        .map(|r| {
            let ty = r.ty();
            let fv = free_vars(&ty);
            (r.name(), ty, fv)
        })
        .collect();
    let mut out = Context::new();
    let flush = |out: &mut Context, pending: &mut Vec<(Name, Expr, BTreeSet<Name>)>| loop {
        let ready = pending.iter().position(|(_, _, fv)| fv.iter().all(|n| out.contains(n)));
        match ready {
            Some(i) => {
                let (n, t, _) = pending.remove(i);
                out.push(n, t).expect("generated names are unique");
            }
            None => break,
        }
    };
    flush(&mut out, &mut pending);
    for (x, t) in user.entries() {
        out.push(x.clone(), t.clone()).map_err(|e| AxiomError::Duplicate(e.0))?;
        flush(&mut out, &mut pending);
    }
    if let Some((n, _, fv)) = pending.first() {
        let names: BTreeSet<&Name> = pending.iter().map(|(m, _, _)| m).collect();
        let missing = fv.iter().find(|m| !out.contains(m)).expect("blocked instance has a missing name");
        return Err(if names.contains(missing) {
            AxiomError::CyclicIndices(n.clone())
        } else {
            AxiomError::OpenIndex(n.clone(), missing.clone())
        });
    }
    Ok(out)
}

/// Terms of the single-sorted pure type system with `* : *`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PtsExpr {
    Star,
    PVar(Name),
    Pi(Name, Box<PtsExpr>, Box<PtsExpr>),
    PLam(Name, Box<PtsExpr>, Box<PtsExpr>),
    PApp(Box<PtsExpr>, Box<PtsExpr>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TranslationError {
    #[error("side condition failed: {0}")]
    SideCondition(TypeError),
    #[error("type of `{0}` is not a cast")]
    NotCast(String),
    #[error("casting index `{0}` depends on a variable bound inside the term")]
    LocalIndex(String),
    #[error("unbound PTS variable `{0}`")]
    Unbound(Name),
    #[error(transparent)]
    Axiom(#[from] AxiomError),
}

struct Pts {
    globals: Context,
    locals: Vec<(Name, Expr)>,
    renames: Vec<(Name, Name)>,
    requests: Vec<AxiomRequest>,
    casts: HashMap<Name, Expr>,
    fuel: u64,
    tick: usize,
}

impl Pts {
    fn context(&self) -> Result<Context, TranslationError> {
        let mut ctx = weave(&self.globals, &self.requests)?;
        for (x, t) in &self.locals {
            ctx.push(x.clone(), t.clone()).expect("fresh local names");
        }
        Ok(ctx)
    }

    fn synth(&self, e: &Expr) -> Result<Expr, TranslationError> {
        synth(&self.context()?, e, self.fuel).map_err(TranslationError::SideCondition)
    }

    fn fresh(&mut self, x: &Name) -> Name {
        loop {
            self.tick += 1;
            let cand = crate::expr::name(&format!("{x}#{}", self.tick));
            if !self.globals.contains(&cand) {
                return cand;
            }
        }
    }

    fn request(&mut self, scheme: Scheme, index: Expr) -> Result<Name, TranslationError> {
        let fv = free_vars(&index);
        if fv.iter().any(|n| self.locals.iter().any(|(l, _)| l == n)) {
            return Err(TranslationError::LocalIndex(crate::print::print(&index)));
        }
        let r = AxiomRequest::new(scheme, vec![index.clone()])?;
        let n = r.name();
        if scheme == Scheme::Cast {
            self.casts.insert(n.clone(), index);
        } else {
            let cast = AxiomRequest::with(Scheme::Cast, &r.indices);
            self.casts.insert(cast.name(), index);
        }
        if !self.requests.contains(&r) {
            self.requests.push(r);
        }
        Ok(n)
    }

    /// Translates `body` under a fresh local `x : dom`; returns the local name and translation.
    fn under(&mut self, x: &Name, dom: Expr, body: &PtsExpr) -> Result<(Name, Expr), TranslationError> {
        let n = self.fresh(x);
        self.locals.push((n.clone(), dom));
        self.renames.push((x.clone(), n.clone()));
        let out = self.tr(body);
        self.renames.pop();
        out.map(|b| (n, b))
    }

    fn tr(&mut self, pe: &PtsExpr) -> Result<Expr, TranslationError> {
        match pe {
            PtsExpr::Star => Ok(Expr::Prim),
            PtsExpr::PVar(x) => {
                if let Some((_, n)) = self.renames.iter().rev().find(|(y, _)| y == x) {
                    Ok(Expr::Var(n.clone()))
                } else if self.globals.contains(x) {
                    Ok(Expr::Var(x.clone()))
                } else {
                    Err(TranslationError::Unbound(x.clone()))
                }
            }
            PtsExpr::Pi(x, a, b) => {
                let a = self.tr(a)?;
                let (n, b) = self.under(x, a.clone(), b)?;
                let c = self.synth(&b);
                self.locals.pop();
                let c = c?;
                let lam = |body: &Expr| Expr::UnivAbs(Hint(x.clone()), bx(a.clone()), bx(close(body, &n)));
                let cast = self.request(Scheme::Cast, lam(&c))?;
                Ok(app(Expr::Var(cast), lam(&b)))
            }
            PtsExpr::PLam(x, a, b) => {
                let a = self.tr(a)?;
                let (n, b) = self.under(x, a.clone(), b)?;
                let cd = self.synth(&b).and_then(|c| self.synth(&c).map(|d| (c, d)));
                self.locals.pop();
                let (c, d) = cd?;
                let lam = |body: &Expr| Expr::UnivAbs(Hint(x.clone()), bx(a.clone()), bx(close(body, &n)));
                let castin = self.request(Scheme::CastIn, lam(&d))?;
                Ok(apps(Expr::Var(castin), [lam(&c), lam(&b)]))
            }
            PtsExpr::PApp(f, a) => {
                let f = self.tr(f)?;
                let a = self.tr(a)?;
                let ty = self.synth(&f)?;
                let ty = reduce_nf(&ty, self.fuel).map_err(|_| TranslationError::SideCondition(TypeError::fuel()))?;
                let (d, c) = match &ty {
                    Expr::Appl(h, c) => match &**h {
                        Expr::Var(n) if self.casts.contains_key(n) => (self.casts[n].clone(), (**c).clone()),
                        _ => return Err(TranslationError::NotCast(crate::print::print(&f))),
                    },
                    _ => return Err(TranslationError::NotCast(crate::print::print(&f))),
                };
                let castout = self.request(Scheme::CastOut, d)?;
                Ok(apps(Expr::Var(castout), [c, f, a]))
            }
        }
    }
}

/// Translates a PTS context and term, returning the woven context (axioms plus
/// translated declarations) and the translated term.
pub fn pts_to_dcalc(pctx: &[(Name, PtsExpr)], pe: &PtsExpr, fuel: u64) -> Result<(Context, Expr), TranslationError> {
    let mut st = Pts {
        globals: Context::new(),
        locals: vec![],
        renames: vec![],
        requests: vec![],
        casts: HashMap::new(),
        fuel,
        tick: 0,
    };
    for (x, a) in pctx {
        let t = st.tr(a)?;
        st.globals.push(x.clone(), t).map_err(|e| TranslationError::Axiom(AxiomError::Duplicate(e.0)))?;
    }
    let e = st.tr(pe)?;
    Ok((weave(&st.globals, &st.requests)?, e))
}
