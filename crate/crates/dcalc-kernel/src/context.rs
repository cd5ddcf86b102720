use std::collections::HashMap;

use thiserror::Error;

use crate::expr::{Expr, Name};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("duplicate declaration of `{0}`")]
pub struct DuplicateName(pub Name);

/// Ordered declarations with pairwise distinct names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(Name, Expr)>,
    index: HashMap<Name, usize>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn from_decls(decls: impl IntoIterator<Item = (Name, Expr)>) -> Result<Context, DuplicateName> {
        let mut ctx = Context::new();
        for (x, t) in decls {
            ctx.push(x, t)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, x: Name, ty: Expr) -> Result<(), DuplicateName> {
        if self.index.contains_key(&x) {
            return Err(DuplicateName(x));
        }
        self.index.insert(x.clone(), self.entries.len());
        self.entries.push((x, ty));
        Ok(())
    }

    pub fn lookup(&self, x: &str) -> Option<&Expr> {
        self.index.get(x).map(|&i| &self.entries[i].1)
    }

    pub fn position(&self, x: &str) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &str) -> bool {
        self.index.contains_key(x)
    }

    /// The first `n` declarations.
    pub fn prefix(&self, n: usize) -> Context {
        Context::from_decls(self.entries[..n].iter().cloned()).expect("prefix of a valid context")
    }

    pub fn entries(&self) -> &[(Name, Expr)] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.entries.iter().map(|(x, _)| x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn extend(&mut self, other: &Context) -> Result<(), DuplicateName> {
        for (x, t) in &other.entries {
            self.push(x.clone(), t.clone())?;
        }
        Ok(())
    }
}
