//! Kernel for the d-calculus: a lambda-typed lambda calculus with existential
//! abstraction, products, sums and negation.
//!
//! Terms are locally nameless ([`expr::Expr`]); bound variables are de Bruijn
//! indices and free variables are names, so structural equality is α-equality.

pub mod axioms;
pub mod context;
pub mod corpus;
pub mod document;
pub mod esubst;
pub mod expr;
pub mod gen;
pub mod lexer;
pub mod minimal;
pub mod negation;
pub mod norm;
pub mod parse;
pub mod print;
pub mod reduce;
pub mod semantics;
pub mod strategy;
pub mod typing;

pub use context::Context;
pub use expr::{Expr, Hint, Name};
pub use parse::{parse_document, parse_expr, ParseError, Session};
pub use print::print;
pub use reduce::{reduce_nf, FuelExhausted};
pub use typing::{check, check_context, synth, valid, TypeError, TypeErrorKind};

/// Default step budget for reduction.
pub const DEFAULT_FUEL: u64 = 100_000;
