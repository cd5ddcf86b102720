//! Minimal implicational logic, its embedding into the calculus under the
//! `Minimal` context, and proof terms for sequent derivations.

use std::fmt;

use rand::Rng;

use crate::context::Context;
use crate::expr::*;
use crate::parse::parse_context;
use crate::reduce::in_normal_set;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    T,
    F,
    Imp(Box<Formula>, Box<Formula>),
}

pub fn imp(a: Formula, b: Formula) -> Formula {
    Formula::Imp(Box::new(a), Box::new(b))
}

impl Formula {
    pub fn depth(&self) -> usize {
        match self {
            Formula::Imp(a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::T => f.write_str("T"),
            Formula::F => f.write_str("F"),
            Formula::Imp(a, b) => write!(f, "({a} => {b})"),
        }
    }
}

pub const MINIMAL_SRC: &str = "F : tau; t, f : F; I : [F;F => F]; \
     i : [p,q:F][[p => q] => I(p,q)]; o : [p,q:F][I(p,q) => [p => q]]";

/// The axiomatization of minimal logic.
pub fn minimal_context() -> Context {
    parse_context(MINIMAL_SRC).expect("minimal context parses")
}

/// `t`, `f`, and `((I a) b)` for implications.
pub fn alpha_map(a: &Formula) -> Expr {
    match a {
        Formula::T => var("t"),
        Formula::F => var("f"),
        Formula::Imp(a, b) => apps(var("I"), [alpha_map(a), alpha_map(b)]),
    }
}

/// Partial inverse of [`alpha_map`]; also reads abstractions as implications.
pub fn beta_map(e: &Expr) -> Option<Formula> {
    match e {
        Expr::Var(x) if &**x == "t" => Some(Formula::T),
        Expr::Var(x) if &**x == "f" => Some(Formula::F),
        Expr::Appl(a, b) => match &**a {
            Expr::Appl(i, c) if matches!(&**i, Expr::Var(n) if &**n == "I") => Some(imp(beta_map(c)?, beta_map(b)?)),
            _ => None,
        },
        Expr::UnivAbs(_, a, b) => {
            // The body may not mention the bound variable for the result to be a formula.
            if has_loose(b, 0) {
                return None;
            }
            let body = beta_map(&shift(b, -1, 0))?;
            if matches!(&**a, Expr::Var(n) if &**n == "F") {
                Some(body)
            } else {
                Some(imp(beta_map(a)?, body))
            }
        }
        _ => None,
    }
}

/// Derivations in the sequent calculus with assumption, implication introduction and elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// The assumption at this position of the antecedent list.
    Ax(usize),
    /// Discharges the given formula.
    ImpI(Formula, Box<Derivation>),
    /// Major premise first.
    ImpE(Box<Derivation>, Box<Derivation>),
}

impl Derivation {
    /// The conclusion under antecedents `gamma`, or `None` if a rule is misapplied.
    pub fn conclusion(&self, gamma: &[Formula]) -> Option<Formula> {
        match self {
            Derivation::Ax(i) => gamma.get(*i).cloned(),
            Derivation::ImpI(a, d) => {
                let mut g = gamma.to_vec();
                g.push(a.clone());
                Some(imp(a.clone(), d.conclusion(&g)?))
            }
            Derivation::ImpE(major, minor) => match major.conclusion(gamma)? {
                Formula::Imp(a, b) if *a == minor.conclusion(gamma)? => Some(*b),
                _ => None,
            },
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Derivation::Ax(_) => 1,
            Derivation::ImpI(_, d) => 1 + d.size(),
            Derivation::ImpE(a, b) => 1 + a.size() + b.size(),
        }
    }
}

pub fn random_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        if rng.gen_bool(0.5) {
            Formula::T
        } else {
            Formula::F
        }
    } else {
        imp(random_formula(rng, depth - 1), random_formula(rng, depth - 1))
    }
}

/// A random closed derivation of bounded height together with its conclusion.
pub fn random_derivation(rng: &mut impl Rng, height: usize) -> (Derivation, Formula) {
    fn go(rng: &mut impl Rng, gamma: &mut Vec<Formula>, height: usize) -> Derivation {
        let can_ax = !gamma.is_empty();
        let choice = if height == 0 { 0 } else { rng.gen_range(0..4) };
        match choice {
            0 if can_ax => Derivation::Ax(rng.gen_range(0..gamma.len())),
            0 | 1 => {
                let a = random_formula(rng, 2);
                gamma.push(a.clone());
                let d = go(rng, gamma, height.saturating_sub(1));
                gamma.pop();
                Derivation::ImpI(a, Box::new(d))
            }
            2 => {
                // A detour: introduce an implication and eliminate it at once.
                let minor = go(rng, gamma, height - 1);
                let a = minor.conclusion(gamma).expect("well-formed");
                gamma.push(a.clone());
                let body = go(rng, gamma, height - 1);
                gamma.pop();
                Derivation::ImpE(Box::new(Derivation::ImpI(a, Box::new(body))), Box::new(minor))
            }
            _ => {
                let major = go(rng, gamma, height - 1);
                match major.conclusion(gamma).expect("well-formed") {
                    Formula::Imp(a, _) if gamma.contains(&a) => {
                        let i = gamma.iter().position(|g| *g == *a).expect("present");
                        Derivation::ImpE(Box::new(major), Box::new(Derivation::Ax(i)))
                    }
                    _ => major,
                }
            }
        }
    }
    let d = go(rng, &mut vec![], height);
    let c = d.conclusion(&[]).expect("generated derivations are well-formed");
    (d, c)
}

/// Proof term under the minimal context: `i` for introduction, `o` for elimination.
pub fn proof_term(d: &Derivation, gamma: &[Formula]) -> Option<Expr> {
    fn go(d: &Derivation, gamma: &mut Vec<Formula>, names: &mut Vec<Name>) -> Option<Expr> {
        match d {
            Derivation::Ax(i) => names.get(*i).map(|n| Expr::Var(n.clone())),
            Derivation::ImpI(a, body) => {
                let h = name(&format!("h{}", names.len()));
                gamma.push(a.clone());
                names.push(h.clone());
                let b = d.conclusion(&gamma[..gamma.len() - 1]);
                let m = go(body, gamma, names);
                names.pop();
                gamma.pop();
                let Formula::Imp(_, b) = b? else { return None };
                Some(apps(var("i"), [alpha_map(a), alpha_map(&b), univ(&h, alpha_map(a), m?)]))
            }
            Derivation::ImpE(major, minor) => {
                let Formula::Imp(a, b) = major.conclusion(gamma)? else { return None };
                let m2 = go(major, gamma, names)?;
                let m1 = go(minor, gamma, names)?;
                Some(apps(var("o"), [alpha_map(&a), alpha_map(&b), m2, m1]))
            }
        }
    }
    let mut g = gamma.to_vec();
    let mut names: Vec<Name> = (0..gamma.len()).map(|k| name(&format!("h{k}"))).collect();
    go(d, &mut g, &mut names)
}

/// Shape filter for normal proofs of formulas: heads `i`/`o`, applied to normal arguments,
/// possibly under one negation.
pub fn in_m1(e: &Expr) -> bool {
    match e {
        Expr::Var(x) => &**x == "i" || &**x == "o",
        Expr::Appl(a, b) => in_m1(a) && in_normal_set(b),
        Expr::Neg(a) => !a.is_neg() && in_m1(a),
        _ => false,
    }
}
