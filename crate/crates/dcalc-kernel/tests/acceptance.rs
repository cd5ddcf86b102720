//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//! Every criterion runs even when an earlier one fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dcalc_kernel::corpus::{load_corpus, CORPUS};
use dcalc_kernel::document::{check_source, CheckOptions};
use dcalc_kernel::esubst::{direct_confluence_violation, joinable, mu_nf, mu_redexes, Env, ExprS};
use dcalc_kernel::gen::{enumerate_exprs, enumerate_normal, gen_negation_heavy, gen_valid};
use dcalc_kernel::minimal::{
    alpha_map, beta_map, in_m1, minimal_context, proof_term, random_derivation, random_formula,
};
use dcalc_kernel::negation::{neg_nf_traced, neg_weight};
use dcalc_kernel::norm::norm;
use dcalc_kernel::reduce::{conv, random_nf, redexes, reduce_nf, trace};
use dcalc_kernel::semantics::{beta_joinable, encode, is_beta_normal, parse_lambda, strip};
use dcalc_kernel::typing::TypeErrorKind;
use dcalc_kernel::{check, parse_expr, print, synth, Context, Expr};

const SEED: u64 = 0x5eed_dca1;
const FUEL: u64 = dcalc_kernel::DEFAULT_FUEL;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Outcome {
        let detail = match failures.first() {
            None => summary,
            Some(first) => format!("{summary}; {} failure(s), first: {first}", failures.len()),
        };
        Outcome { pass: failures.is_empty(), detail }
    }
}

fn e(s: &str) -> Expr {
    parse_expr(s).unwrap_or_else(|err| panic!("{s}: {err}"))
}

fn c1_corpus() -> Outcome {
    let start = Instant::now();
    let mut fails = vec![];
    let (mut decls, mut deds) = (0, 0);
    for f in CORPUS {
        let opts = CheckOptions { axioms: f.axioms.iter().copied().collect(), ..Default::default() };
        let r = check_source(f.name, f.source, &opts);
        decls += r.declarations_checked;
        deds += r.deductions_checked;
        fails.extend(r.errors.iter().map(|d| format!("{}:{d}", f.name)));
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(10) {
        fails.push(format!("took {took:?}"));
    }
    Outcome::new(&fails, format!("{} files, {decls} declarations, {deds} deductions in {took:.2?}", CORPUS.len()))
}

fn c2_named_terms() -> Outcome {
    let ctx = Context::new();
    let mut fails = vec![];
    let exact =
        [("tau", "tau"), ("[x:tau]x", "[x:tau]tau"), ("[x:tau]tau", "[x:tau]tau"), ("<x:=tau, tau : ~x>", "[x!tau]~x")];
    for (term, ty) in exact {
        match synth(&ctx, &e(term), FUEL) {
            Ok(t) if t == e(ty) => {}
            other => fails.push(format!("{term} : {:?}, wanted {ty}", other.map(|t| print(&t)))),
        }
    }
    if let Err(err) = check(&ctx, &e("<x:=tau, tau : ~x>"), &e("~[x:tau]x"), FUEL) {
        fails.push(format!("protected definition against tr: {err}"));
    }
    match synth(&ctx, &e("([x:tau]x [x:tau]tau)"), FUEL) {
        Err(err) if matches!(err.kind, TypeErrorKind::NotAFunction | TypeErrorKind::DomainMismatch) => {}
        other => fails.push(format!("(I C) was not rejected as expected: {other:?}")),
    }
    Outcome::new(&fails, "4 exact types, conversion to tr, (I C) rejected".into())
}

fn generated(n: usize) -> Vec<(Context, Expr)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..n).map(|_| gen_valid(&mut rng, 7)).collect()
}

fn c3_metatheory(terms: &[(Context, Expr)]) -> Outcome {
    let mut fails = vec![];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let (mut max_steps, mut singles, mut max_depth) = (0u64, 0usize, 0usize);
    for (ctx, t) in terms {
        let p = print(t);
        max_depth = max_depth.max(t.depth());
        let ty = match synth(ctx, t, FUEL) {
            Ok(ty) => ty,
            Err(err) => {
                fails.push(format!("generator produced invalid {p}: {err}"));
                continue;
            }
        };
        for r in redexes(t) {
            singles += 1;
            match synth(ctx, &r.result, FUEL).map(|t2| conv(&ty, &t2, FUEL)) {
                Ok(Ok(true)) => {}
                other => fails.push(format!("subject reduction: {p} --{}--> {}: {other:?}", r.axiom, print(&r.result))),
            }
        }
        let (a, b) = match (random_nf(t, &mut rng, FUEL), random_nf(t, &mut rng, FUEL)) {
            (Ok((a, sa)), Ok((b, sb))) => {
                max_steps = max_steps.max(sa).max(sb);
                (a, b)
            }
            _ => {
                fails.push(format!("strong normalization: {p} exceeds {FUEL} steps"));
                continue;
            }
        };
        if a != b {
            fails.push(format!("confluence: {p} reaches {} and {}", print(&a), print(&b)));
        }
        let n = norm(ctx, t);
        if n.is_none() || norm(ctx, &a) != n || norm(ctx, &ty) != n {
            fails.push(format!("norms: {p}"));
        }
        if let Err(err) = synth(ctx, &ty, FUEL) {
            fails.push(format!("type of type: {} : {err}", print(&ty)));
        }
    }
    if terms.len() < 1000 || max_depth > 7 {
        fails.push(format!("{} terms with max depth {max_depth}", terms.len()));
    }
    Outcome::new(
        &fails,
        format!(
            "{} terms (depth <= {max_depth}), {singles} single steps, max normalization {max_steps} steps",
            terms.len()
        ),
    )
}

fn c4_oracle(terms: &[(Context, Expr)]) -> Outcome {
    let mut fails = vec![];
    for (_, t) in terms {
        let mu = mu_nf(&Env::new(), &ExprS::from(t), FUEL);
        let lo = reduce_nf(t, FUEL);
        if mu.is_err() || mu.ok() != lo.ok() {
            fails.push(format!("oracle: mu_nf and reduce_nf disagree on {}", print(t)));
        }
    }
    let env = Env::new();
    let all = enumerate_exprs(6);
    let (mut critical, mut violations, mut unjoinable) = (0usize, vec![], 0usize);
    for s in &all {
        let rs = mu_redexes(&env, s);
        if rs.len() < 2 {
            continue;
        }
        critical += 1;
        if let Some((r1, r2)) = direct_confluence_violation(&env, s) {
            if !joinable(&env, &r1.result, &r2.result, 4) {
                unjoinable += 1;
            }
            violations.push((s.size(), format!("{s} -> {} | {}", r1.result, r2.result)));
        }
    }
    violations.sort();
    fails.extend(violations.iter().map(|(n, v)| format!("direct confluence (size {n}): {v}")));
    Outcome::new(
        &fails,
        format!(
            "{} generated terms agree; {} terms of size <= 6 enumerated, {critical} with >= 2 redexes, {unjoinable} unjoinable within 4 steps",
            terms.len(),
            all.len()
        ),
    )
}

fn c5_consistency() -> Outcome {
    let start = Instant::now();
    let ctx = Context::new();
    let falsum = e("[x:tau]x");
    let all = enumerate_normal(8);
    let mut typed = 0;
    let mut fails = vec![];
    for t in &all {
        if let Ok(ty) = synth(&ctx, t, FUEL) {
            typed += 1;
            if conv(&ty, &falsum, FUEL) == Ok(true) {
                fails.push(format!("{} : {}", print(t), print(&ty)));
            }
        }
    }
    Outcome::new(&fails, format!("{} closed normal forms, {typed} valid, in {:.2?}", all.len(), start.elapsed()))
}

fn c6_semantics() -> Outcome {
    let mut fails = vec![];
    let (mut steps, mut normal_forms) = (0usize, 0usize);
    for f in CORPUS {
        let loaded = load_corpus(f.name).expect("corpus loads");
        for (d, ty) in &loaded.deductions {
            for t in [d, ty] {
                let tr = trace(t, FUEL).expect("corpus terms normalize");
                let mut prev = t.clone();
                for s in &tr.steps {
                    steps += 1;
                    for (map, m) in [("strip", strip as fn(&Expr) -> _), ("encode", encode)] {
                        if beta_joinable(&m(&prev), &m(&s.result), FUEL) != Ok(true) {
                            fails.push(format!("{}: {map} does not follow {} on {}", f.name, s.axiom, print(&prev)));
                        }
                    }
                    prev = s.result.clone();
                }
                normal_forms += 1;
                for (map, m) in [("strip", strip as fn(&Expr) -> _), ("encode", encode)] {
                    let img = m(&prev);
                    if !is_beta_normal(&img) {
                        fails.push(format!(
                            "{}: {map} image of normal form {} is reducible: {img}",
                            f.name,
                            print(&prev)
                        ));
                    }
                }
            }
        }
    }
    let worked = [
        (strip(&e("[p:tau][q:tau][x:p][y:[z:p]q](y x)")), "\\p.\\q.\\x.\\y.(y x)"),
        (encode(&e("[x:tau][y:x]y")), "\\z.(z pi \\x.(\\z.(z x \\y.y)))"),
    ];
    for (got, want) in worked {
        if got != parse_lambda(want).unwrap() {
            fails.push(format!("worked translation: got {got}, wanted {want}"));
        }
    }
    Outcome::new(&fails, format!("{steps} corpus reduction steps, {normal_forms} normal forms, 2 worked translations"))
}

fn c7_negation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut fails = vec![];
    let (mut steps, mut divergent) = (0usize, 0usize);
    for _ in 0..10_000 {
        let t = gen_negation_heavy(&mut rng, 6);
        let (nf, trace) = neg_nf_traced(&t);
        let mut prev = t.clone();
        for s in &trace {
            steps += 1;
            if neg_weight(&s.result) >= neg_weight(&prev) {
                fails.push(format!("weight does not drop: {} --{}--> {}", print(&prev), s.axiom, print(&s.result)));
            }
            prev = s.result.clone();
        }
        match (reduce_nf(&nf, FUEL), reduce_nf(&t, FUEL)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(a), Ok(b)) => {
                fails.push(format!("{} joins to {} but neg_nf path gives {}", print(&t), print(&b), print(&a)))
            }
            _ => divergent += 1,
        }
    }
    Outcome::new(&fails, format!("10000 terms, {steps} negation steps, {divergent} without a normal form within fuel"))
}

fn c8_minimal() -> Outcome {
    let mut fails = vec![];
    let loaded = load_corpus("minimal").expect("minimal corpus loads");
    for (d, ty) in &loaded.deductions {
        if let Err(err) = check(&loaded.context, d, ty, FUEL) {
            fails.push(format!("corpus deduction {}: {err}", print(d)));
        }
    }
    let ctx = minimal_context();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    for _ in 0..500 {
        let (d, concl) = random_derivation(&mut rng, 5);
        let Some(term) = proof_term(&d, &[]) else {
            fails.push(format!("no proof term for a derivation of {concl}"));
            continue;
        };
        if let Err(err) = check(&ctx, &term, &alpha_map(&concl), FUEL) {
            fails.push(format!("{} against {concl}: {err}", print(&term)));
        } else if !reduce_nf(&term, FUEL).is_ok_and(|n| in_m1(&n)) {
            fails.push(format!("normal form of {} is outside the proof-term shape", print(&term)));
        }
    }
    let mut seen = BTreeSet::new();
    for _ in 0..1000 {
        let f = random_formula(&mut rng, 6);
        if beta_map(&alpha_map(&f)).as_ref() != Some(&f) {
            fails.push(format!("beta(alpha({f})) differs"));
        }
        seen.insert(f.to_string());
    }
    Outcome::new(&fails, format!("2 corpus deductions, 500 derivations, 1000 formulas ({} distinct)", seen.len()))
}

fn main() -> ExitCode {
    let terms = generated(1000);
    let criteria: [Criterion; 8] = [
        ("corpus soundness", Box::new(c1_corpus)),
        ("named terms", Box::new(c2_named_terms)),
        ("metatheory on generated terms", Box::new(|| c3_metatheory(&terms))),
        ("explicit-substitution oracle and direct confluence", Box::new(|| c4_oracle(&terms))),
        ("consistency of small normal forms", Box::new(c5_consistency)),
        ("semantic mappings", Box::new(c6_semantics)),
        ("negation reduction", Box::new(c7_negation)),
        ("minimal-logic adequacy", Box::new(c8_minimal)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {}: {name}: {} [{:.2?}]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
