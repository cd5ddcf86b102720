//! The shipped example formalizations, embedded at compile time.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::axioms::Family;
use crate::context::Context;
use crate::document::{elaborate, Diagnostic};
use crate::expr::Expr;

pub struct CorpusFile {
    pub name: &'static str,
    pub source: &'static str,
    /// Scheme families the file requests.
    pub axioms: &'static [Family],
}

macro_rules! corpus_file {
    ($name:literal, $axioms:expr) => {
        CorpusFile { name: $name, source: include_str!(concat!("../../../corpus/", $name, ".dc")), axioms: $axioms }
    };
}

pub const CORPUS: &[CorpusFile] = &[
    corpus_file!("logic", &[]),
    corpus_file!("classical", &[Family::Neg]),
    corpus_file!("minimal", &[]),
    corpus_file!("equality", &[]),
    corpus_file!("cartesian", &[Family::Cast]),
    corpus_file!("naturals", &[]),
    corpus_file!("sets", &[Family::Cast]),
    corpus_file!("group", &[]),
    corpus_file!("casting", &[Family::Cast]),
];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("no corpus file named `{0}`")]
    Unknown(String),
    #[error("corpus file `{0}`: {1}")]
    Invalid(String, Box<Diagnostic>),
}

/// A corpus file's context, axiom instances included, and its deductions with claimed types.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub context: Context,
    pub deductions: Vec<(Expr, Expr)>,
}

pub fn corpus_file(name: &str) -> Option<&'static CorpusFile> {
    CORPUS.iter().find(|f| f.name == name)
}

pub fn load_corpus(name: &str) -> Result<Loaded, CorpusError> {
    let file = corpus_file(name).ok_or_else(|| CorpusError::Unknown(name.to_string()))?;
    let families: BTreeSet<Family> = file.axioms.iter().copied().collect();
    let doc = elaborate(file.source, &families).map_err(|d| CorpusError::Invalid(name.to_string(), Box::new(d)))?;
    Ok(Loaded { context: doc.context, deductions: doc.checks.into_iter().map(|(t, ty, _)| (t, ty)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimal::in_m1;
    use crate::parse::parse_expr;
    use crate::reduce::reduce_nf;

    #[test]
    fn every_file_loads_with_its_declared_families() {
        for f in CORPUS {
            let l = load_corpus(f.name).unwrap_or_else(|e| panic!("{e}"));
            assert!(!l.context.is_empty(), "{}", f.name);
        }
        assert!(matches!(load_corpus("nope"), Err(CorpusError::Unknown(_))));
    }

    #[test]
    fn minimal_deductions_have_normal_forms_of_the_expected_shape() {
        let l = load_corpus("minimal").unwrap();
        assert_eq!(l.deductions[0].0, parse_expr("i(p, I(q,p), [x:p]i(q, p, [y:q]x))").unwrap());
        for (d, _) in &l.deductions {
            assert!(in_m1(&reduce_nf(d, 1000).unwrap()));
        }
    }
}
