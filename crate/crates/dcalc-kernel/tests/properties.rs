//! Property tests for the kernel's laws. Random valid terms come from the
//! rule-driven generator seeded by proptest; raw terms come from a structural strategy.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dcalc_kernel::axioms::{
    check_enabled, instantiate_axioms, pts_to_dcalc, AxiomRequest, Family, PtsExpr, Scheme, TranslationError,
};
use dcalc_kernel::esubst::{def_step, def_weight, mu_nf, mu_step, Env, ExprS};
use dcalc_kernel::expr::*;
use dcalc_kernel::gen::{gen_negation_heavy, gen_valid};
use dcalc_kernel::minimal::{alpha_map, beta_map, random_formula};
use dcalc_kernel::negation::{neg_nf, neg_nf_traced, neg_weight};
use dcalc_kernel::norm::{norm, normable};
use dcalc_kernel::reduce::{classify_nf, conv, random_nf, redexes, reduce_nf, Axiom, NfClass};
use dcalc_kernel::semantics::{beta_joinable, beta_nf, encode, strip};
use dcalc_kernel::{check_context, parse_expr, print, synth, Context, Expr};

const FUEL: u64 = 10_000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn valid(seed: u64) -> (Context, Expr) {
    gen_valid(&mut rng(seed), 5)
}

/// Locally closed raw terms over free names a, b, c and binders named x, y.
fn raw_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::Prim), prop::sample::select(vec!["a", "b", "c", "x", "y"]).prop_map(var),];
    let tree = leaf.prop_recursive(5, 48, 3, |inner| {
        let binder = prop::sample::select(vec!["x", "y"]);
        prop_oneof![
            (binder.clone(), inner.clone(), inner.clone()).prop_map(|(x, a, b)| univ(x, a, b)),
            (binder.clone(), inner.clone(), inner.clone()).prop_map(|(x, a, b)| exist(x, a, b)),
            (binder, inner.clone(), inner.clone(), inner.clone()).prop_map(|(x, a, b, c)| protdef(x, a, b, c)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| app(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| product(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| inj_l(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| inj_r(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| case(a, b)),
            inner.clone().prop_map(proj_l),
            inner.clone().prop_map(proj_r),
            inner.prop_map(neg),
        ]
    });
    tree.prop_filter("free binder names would read as globals", |e| {
        let fv = free_vars(e);
        !fv.contains("x") && !fv.contains("y")
    })
}

fn small_closed() -> impl Strategy<Value = Expr> {
    prop::sample::select(vec!["tau", "a", "[x:tau]x", "~b", "[a,tau]", "inl(a,b)"]).prop_map(|s| parse_expr(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(e in raw_expr()) {
        let back = parse_expr(&print(&e)).unwrap();
        prop_assert_eq!(free_vars(&back), free_vars(&e));
        prop_assert_eq!(back, e);
    }

    #[test]
    fn substituting_an_absent_name_is_identity(e in raw_expr(), b in small_closed()) {
        prop_assume!(!occurs_free(&e, "c"));
        prop_assert_eq!(subst(&e, "c", &b), e);
    }

    #[test]
    fn independent_substitutions_commute(e in raw_expr(), b in small_closed(), c in small_closed()) {
        prop_assume!(!occurs_free(&c, "a") && !occurs_free(&b, "b"));
        let ab = subst(&subst(&e, "a", &b), "b", &c);
        let ba = subst(&subst(&e, "b", &c), "a", &b);
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn reduction_never_adds_free_names(e in raw_expr()) {
        let fv = free_vars(&e);
        for r in redexes(&e) {
            prop_assert!(free_vars(&r.result).is_subset(&fv), "{} -> {}", print(&e), print(&r.result));
            prop_assert!(is_locally_closed(&r.result));
        }
    }

    #[test]
    fn classification_agrees_with_redex_search(e in raw_expr()) {
        let reducible = !redexes(&e).is_empty();
        prop_assert_eq!(classify_nf(&e) == NfClass::Reducible, reducible);
    }

    #[test]
    fn substitution_commutes_with_reduction(e in raw_expr(), c in small_closed()) {
        let (Ok(lhs), Ok(nf)) = (reduce_nf(&subst(&e, "a", &c), FUEL), reduce_nf(&e, FUEL)) else {
            return Err(TestCaseError::reject("no normal form within fuel"));
        };
        let Ok(rhs) = reduce_nf(&subst(&nf, "a", &c), FUEL) else {
            return Err(TestCaseError::reject("no normal form within fuel"));
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn negation_weight_decreases_on_every_step(seed: u64) {
        let e = gen_negation_heavy(&mut rng(seed), 6);
        let (nf, steps) = neg_nf_traced(&e);
        let mut prev = e.clone();
        for s in &steps {
            prop_assert!(neg_weight(&s.result) < neg_weight(&prev), "{} -> {}", print(&prev), print(&s.result));
            prev = s.result.clone();
        }
        prop_assert_eq!(prev, nf);
    }

    #[test]
    fn negation_critical_pairs_join(seed: u64, s1: u64, s2: u64) {
        let e = gen_negation_heavy(&mut rng(seed), 6);
        let (Ok((a, _)), Ok((b, _))) = (random_nf(&e, &mut rng(s1), FUEL), random_nf(&e, &mut rng(s2), FUEL)) else {
            return Err(TestCaseError::reject("no normal form within fuel"));
        };
        prop_assert_eq!(&a, &b);
        if let Ok(n) = reduce_nf(&neg_nf(&e), FUEL) {
            prop_assert_eq!(n, a);
        }
    }

    #[test]
    fn minimal_formulas_round_trip(seed: u64) {
        let f = random_formula(&mut rng(seed), 6);
        prop_assert_eq!(beta_map(&alpha_map(&f)), Some(f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn subject_reduction(seed: u64) {
        let (ctx, e) = valid(seed);
        let t = synth(&ctx, &e, FUEL).unwrap();
        for r in redexes(&e) {
            let t2 = synth(&ctx, &r.result, FUEL).map_err(|err| TestCaseError::fail(format!("{} after {}: {err}", print(&r.result), r.axiom)))?;
            prop_assert!(conv(&t, &t2, FUEL).unwrap(), "{} : {} but {} : {}", print(&e), print(&t), print(&r.result), print(&t2));
        }
    }

    #[test]
    fn random_strategies_are_confluent(seed: u64, s1: u64, s2: u64) {
        let (_, e) = valid(seed);
        let (a, _) = random_nf(&e, &mut rng(s1), FUEL).unwrap();
        let (b, _) = random_nf(&e, &mut rng(s2), FUEL).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(reduce_nf(&e, FUEL).unwrap(), a);
    }

    #[test]
    fn normal_forms_keep_their_type(seed: u64) {
        let (ctx, e) = valid(seed);
        let t = synth(&ctx, &e, FUEL).unwrap();
        let nf = reduce_nf(&e, FUEL).unwrap();
        prop_assert_eq!(classify_nf(&nf) == NfClass::Reducible, false);
        let tn = synth(&ctx, &nf, FUEL).unwrap();
        prop_assert!(conv(&t, &tn, FUEL).unwrap());
    }

    #[test]
    fn types_are_valid(seed: u64) {
        let (ctx, e) = valid(seed);
        let t = synth(&ctx, &e, FUEL).unwrap();
        prop_assert!(synth(&ctx, &t, FUEL).is_ok(), "type {} of {} is invalid", print(&t), print(&e));
    }

    #[test]
    fn declared_names_have_their_declared_type(seed: u64) {
        let (ctx, _) = valid(seed);
        for (x, a) in ctx.entries() {
            let t = synth(&ctx, &Expr::Var(x.clone()), FUEL).unwrap();
            prop_assert!(conv(&t, a, FUEL).unwrap());
        }
    }

    #[test]
    fn typing_implies_matching_norms(seed: u64) {
        let (ctx, e) = valid(seed);
        prop_assert!(normable(&ctx, &e));
        let n = norm(&ctx, &e).unwrap();
        let t = synth(&ctx, &e, FUEL).unwrap();
        prop_assert_eq!(norm(&ctx, &t), Some(n.clone()));
        prop_assert_eq!(norm(&ctx, &reduce_nf(&e, FUEL).unwrap()), Some(n));
    }

    #[test]
    fn every_step_preserves_the_norm(seed: u64) {
        let (ctx, e) = valid(seed);
        let n = norm(&ctx, &e);
        for r in redexes(&e) {
            prop_assert_eq!(norm(&ctx, &r.result), n.clone());
        }
    }

    #[test]
    fn norm_matching_substitution_preserves_norms(seed: u64) {
        let (ctx, e) = valid(seed);
        let names: Vec<Name> = ctx.names().cloned().collect();
        for x in &names {
            for y in &names {
                let (vx, vy) = (Expr::Var(x.clone()), Expr::Var(y.clone()));
                if x != y && norm(&ctx, &vx) == norm(&ctx, &vy) {
                    prop_assert_eq!(norm(&ctx, &subst(&e, x, &vy)), norm(&ctx, &e));
                }
            }
        }
    }

    #[test]
    fn explicit_substitution_agrees_with_reduction(seed: u64) {
        let (_, e) = valid(seed);
        prop_assert_eq!(mu_nf(&Env::new(), &ExprS::from(&e), FUEL).unwrap(), reduce_nf(&e, FUEL).unwrap());
    }

    #[test]
    fn definition_weight_decreases_on_every_step(seed: u64, mu_steps in 0usize..12) {
        let (_, e) = valid(seed);
        let env = Env::new();
        let mut cur = ExprS::from(&e);
        for _ in 0..mu_steps {
            match mu_step(&env, &cur) {
                Some(r) => cur = r.result,
                None => break,
            }
        }
        while let Some(r) = def_step(&env, &cur) {
            prop_assert!(def_weight(&env, &r.result) < def_weight(&env, &cur), "{} -> {}", cur, r.result);
            cur = r.result;
        }
    }

    #[test]
    fn strip_follows_every_step(seed: u64) {
        let (_, e) = valid(seed);
        let s = strip(&e);
        for r in redexes(&e) {
            prop_assert!(beta_joinable(&s, &strip(&r.result), FUEL).unwrap(), "{} after {}", print(&e), r.axiom);
        }
    }

    #[test]
    fn encode_follows_every_step_but_case_selection(seed: u64) {
        let (_, e) = valid(seed);
        let s = encode(&e);
        for r in redexes(&e) {
            if matches!(r.axiom, Axiom::Beta3 | Axiom::Beta4) {
                continue;
            }
            prop_assert!(beta_joinable(&s, &encode(&r.result), FUEL).unwrap(), "{} after {}", print(&e), r.axiom);
        }
    }

    #[test]
    fn convertible_terms_strip_to_the_same_normal_form(seed: u64) {
        let (_, e) = valid(seed);
        let nf = reduce_nf(&e, FUEL).unwrap();
        prop_assert_eq!(beta_nf(&strip(&e), FUEL).unwrap(), beta_nf(&strip(&nf), FUEL).unwrap());
    }
}

/// Case selection discards the injection tag, which the encoding keeps inside
/// the pair it builds; the two sides only agree after the case branch is applied
/// to the payload, and the encoded case passes an extra argument.
#[test]
fn encode_does_not_follow_case_selection() {
    let e = parse_expr("(case([x:tau]x, [y:tau]y) inl(tau, tau))").unwrap();
    let r = &redexes(&e)[0];
    assert_eq!(r.axiom, Axiom::Beta3);
    assert!(!beta_joinable(&encode(&e), &encode(&r.result), FUEL).unwrap());
    assert!(beta_joinable(&strip(&e), &strip(&r.result), FUEL).unwrap());
}

#[test]
fn instantiation_is_deterministic_and_valid() {
    let a = parse_expr("[x:tau]x").unwrap();
    let b = parse_expr("tau").unwrap();
    let reqs = vec![
        AxiomRequest::new(Scheme::from_surface("negax-").unwrap(), vec![a.clone(), b.clone()]).unwrap(),
        AxiomRequest::new(Scheme::from_surface("cast").unwrap(), vec![a.clone()]).unwrap(),
        AxiomRequest::new(Scheme::from_surface("castout").unwrap(), vec![a]).unwrap(),
    ];
    let one = instantiate_axioms(&reqs).unwrap();
    let two = instantiate_axioms(&reqs).unwrap();
    assert_eq!(one.entries(), two.entries());
    check_context(&one, FUEL).unwrap();
    assert!(check_enabled(&reqs, &[Family::Neg].into()).is_err());
    assert!(check_enabled(&reqs, &[Family::Neg, Family::Cast].into()).is_ok());
}

mod pts {
    use super::*;
    use PtsExpr::*;

    fn v(x: &str) -> PtsExpr {
        PVar(name(x))
    }
    fn pi(x: &str, a: PtsExpr, b: PtsExpr) -> PtsExpr {
        Pi(name(x), Box::new(a), Box::new(b))
    }
    fn plam(x: &str, a: PtsExpr, b: PtsExpr) -> PtsExpr {
        PLam(name(x), Box::new(a), Box::new(b))
    }
    fn papp(f: PtsExpr, a: PtsExpr) -> PtsExpr {
        PApp(Box::new(f), Box::new(a))
    }

    fn translates_to_valid(ctx: &[(Name, PtsExpr)], e: &PtsExpr) -> (Context, Expr) {
        let (c, t) = pts_to_dcalc(ctx, e, FUEL).unwrap_or_else(|err| panic!("{e:?}: {err}"));
        check_context(&c, FUEL).unwrap();
        synth(&c, &t, FUEL).unwrap_or_else(|err| panic!("{}: {err}", print(&t)));
        (c, t)
    }

    #[test]
    fn star_is_the_constant() {
        let (c, t) = translates_to_valid(&[], &Star);
        assert!(c.is_empty());
        assert_eq!(t, Expr::Prim);
    }

    #[test]
    fn variables_translate_to_themselves() {
        let ctx = [(name("A"), Star)];
        let (_, t) = translates_to_valid(&ctx, &v("A"));
        assert_eq!(t, var("A"));
    }

    #[test]
    fn products_over_star_are_cast() {
        let (c, t) = translates_to_valid(&[], &pi("x", Star, v("x")));
        assert_eq!(c.len(), 1);
        let (cast, _) = &c.entries()[0];
        assert!(cast.starts_with("cast_"));
        assert_eq!(t, app(Expr::Var(cast.clone()), parse_expr("[x:tau]x").unwrap()));
    }

    #[test]
    fn small_first_order_terms_stay_valid() {
        let ctx = [(name("A"), Star), (name("a"), v("A"))];
        let id = plam("y", v("A"), v("y"));
        translates_to_valid(&ctx, &id);
        translates_to_valid(&ctx, &papp(id, v("a")));
        translates_to_valid(&ctx, &pi("y", v("A"), v("A")));
        translates_to_valid(&ctx, &plam("f", pi("y", v("A"), v("A")), papp(v("f"), v("a"))));
    }

    /// Axiom instances are global, so an index mentioning a bound type variable has no instance.
    #[test]
    fn casts_over_local_type_variables_are_rejected() {
        let poly_id = plam("X", Star, plam("y", v("X"), v("y")));
        assert!(matches!(pts_to_dcalc(&[], &poly_id, FUEL), Err(TranslationError::LocalIndex(_))));
    }
}
