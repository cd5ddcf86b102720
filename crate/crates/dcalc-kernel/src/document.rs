//! Checking whole source documents: the axiom prefix is woven into the user
//! context, the context is validated, then every `check` assertion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::axioms::{check_enabled, weave, Family};
use crate::context::Context;
use crate::expr::{render_path, Expr};
use crate::parse::Session;
use crate::print::print;
use crate::typing::{check, check_context, synth, TypeError};

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub fuel: u64,
    pub axioms: BTreeSet<Family>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { fuel: crate::DEFAULT_FUEL, axioms: BTreeSet::new() }
    }
}

/// One failure, rendered for humans or machines.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub line: usize,
    pub kind: &'static str,
    pub path: String,
    pub message: String,
    pub expected: Option<String>,
    pub found: Option<String>,
}

impl Diagnostic {
    fn plain(line: usize, kind: &'static str, message: impl Into<String>) -> Diagnostic {
        Diagnostic { line, kind, path: "root".into(), message: message.into(), expected: None, found: None }
    }

    fn typing(line: usize, e: &TypeError) -> Diagnostic {
        Diagnostic {
            line,
            kind: e.kind.name(),
            path: render_path(&e.path),
            message: e.message.clone(),
            expected: e.expected.as_deref().map(print),
            found: e.found.as_deref().map(print),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} at {}: {}", self.line, self.kind, self.path, self.message)?;
        if let (Some(e), Some(g)) = (&self.expected, &self.found) {
            write!(f, " (expected {e}, found {g})")?;
        }
        Ok(())
    }
}

/// Outcome of checking one document. `errors` is empty iff the document is accepted.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub file: String,
    pub declarations_checked: usize,
    pub deductions_checked: usize,
    pub errors: Vec<Diagnostic>,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// A parsed document with its axiom prefix woven in.
#[derive(Clone, Debug)]
pub struct Elaborated {
    pub context: Context,
    /// `(term, claimed type, line)`.
    pub checks: Vec<(Expr, Expr, usize)>,
}

pub fn elaborate(src: &str, axioms: &BTreeSet<Family>) -> Result<Elaborated, Diagnostic> {
    let mut session = Session::new();
    let doc = session.parse_document(src).map_err(|e| Diagnostic::plain(e.line, "ParseError", e.msg))?;
    let user = doc.user_context().map_err(|e| Diagnostic::plain(e.line, "ParseError", e.msg))?;
    check_enabled(&doc.requests, axioms).map_err(|e| Diagnostic::plain(0, "AxiomError", e.to_string()))?;
    let context = weave(&user, &doc.requests).map_err(|e| Diagnostic::plain(0, "AxiomError", e.to_string()))?;
    let checks = doc.checks().map(|(t, ty, line)| (t.clone(), ty.clone(), line)).collect();
    Ok(Elaborated { context, checks })
}

/// An expression read after an optional context document; the axiom prefix covers both.
pub fn elaborate_expr(
    ctx_src: Option<&str>,
    expr_src: &str,
    axioms: &BTreeSet<Family>,
) -> Result<(Context, Expr), Diagnostic> {
    let mut session = Session::new();
    let user = match ctx_src {
        Some(src) => {
            let doc = session.parse_document(src).map_err(|e| Diagnostic::plain(e.line, "ParseError", e.msg))?;
            doc.user_context().map_err(|e| Diagnostic::plain(e.line, "ParseError", e.msg))?
        }
        None => Context::new(),
    };
    let e = session.parse_expr(expr_src).map_err(|e| Diagnostic::plain(e.line, "ParseError", e.msg))?;
    check_enabled(session.requests(), axioms).map_err(|e| Diagnostic::plain(0, "AxiomError", e.to_string()))?;
    let ctx = weave(&user, session.requests()).map_err(|e| Diagnostic::plain(0, "AxiomError", e.to_string()))?;
    Ok((ctx, e))
}

pub fn check_source(file: &str, src: &str, opts: &CheckOptions) -> CheckReport {
    let start = Instant::now();
    let mut report = CheckReport {
        file: file.to_string(),
        declarations_checked: 0,
        deductions_checked: 0,
        errors: vec![],
        elapsed: Duration::ZERO,
    };
    match elaborate(src, &opts.axioms) {
        Err(d) => report.errors.push(d),
        Ok(doc) => {
            report.declarations_checked = doc.context.len();
            match check_context(&doc.context, opts.fuel) {
                Err(e) => report.errors.push(Diagnostic::typing(0, &e)),
                Ok(()) => {
                    for (term, ty, line) in &doc.checks {
                        report.deductions_checked += 1;
                        let r =
                            synth(&doc.context, ty, opts.fuel).and_then(|_| check(&doc.context, term, ty, opts.fuel));
                        if let Err(e) = r {
                            report.errors.push(Diagnostic::typing(*line, &e));
                        }
                    }
                }
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}
