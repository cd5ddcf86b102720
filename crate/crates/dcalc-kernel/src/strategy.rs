//! Named, interchangeable reduction strategies and semantic maps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::esubst::{mu_nf, Env, ExprS};
use crate::expr::Expr;
use crate::reduce::{random_nf, reduce_nf, FuelExhausted};
use crate::semantics::{encode, strip, LambdaTerm};

/// A way of reaching the normal form of a term. Every strategy must agree on valid terms.
pub trait ReductionStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn normalize(&self, e: &Expr, fuel: u64) -> Result<Expr, FuelExhausted>;
}

pub struct LeftmostOutermost;

impl ReductionStrategy for LeftmostOutermost {
    fn name(&self) -> &'static str {
        "leftmost-outermost"
    }
    fn normalize(&self, e: &Expr, fuel: u64) -> Result<Expr, FuelExhausted> {
        reduce_nf(e, fuel)
    }
}

/// Uniformly random redex choice; reproducible for a fixed seed.
pub struct RandomRedex {
    pub seed: u64,
}

impl ReductionStrategy for RandomRedex {
    fn name(&self) -> &'static str {
        "random"
    }
    fn normalize(&self, e: &Expr, fuel: u64) -> Result<Expr, FuelExhausted> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        random_nf(e, &mut rng, fuel).map(|(t, _)| t)
    }
}

/// Explicit substitution in the empty environment.
pub struct ExplicitSubst;

impl ReductionStrategy for ExplicitSubst {
    fn name(&self) -> &'static str {
        "mu"
    }
    fn normalize(&self, e: &Expr, fuel: u64) -> Result<Expr, FuelExhausted> {
        mu_nf(&Env::new(), &ExprS::from(e), fuel)
    }
}

pub fn strategies() -> Vec<Box<dyn ReductionStrategy>> {
    vec![Box::new(LeftmostOutermost), Box::new(RandomRedex { seed: 0 }), Box::new(ExplicitSubst)]
}

pub fn strategy(name: &str) -> Option<Box<dyn ReductionStrategy>> {
    strategies().into_iter().find(|s| s.name() == name)
}

/// A translation into the untyped lambda calculus.
pub trait SemanticMap: Send + Sync {
    fn name(&self) -> &'static str;
    fn map(&self, e: &Expr) -> LambdaTerm;
}

pub struct Strip;

impl SemanticMap for Strip {
    fn name(&self) -> &'static str {
        "strip"
    }
    fn map(&self, e: &Expr) -> LambdaTerm {
        strip(e)
    }
}

pub struct Encode;

impl SemanticMap for Encode {
    fn name(&self) -> &'static str {
        "encode"
    }
    fn map(&self, e: &Expr) -> LambdaTerm {
        encode(e)
    }
}

pub fn semantic_maps() -> Vec<Box<dyn SemanticMap>> {
    vec![Box::new(Strip), Box::new(Encode)]
}

pub fn semantic_map(name: &str) -> Option<Box<dyn SemanticMap>> {
    semantic_maps().into_iter().find(|m| m.name() == name)
}
