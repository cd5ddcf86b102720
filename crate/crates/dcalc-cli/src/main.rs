use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dcalc_kernel::axioms::Family;
use dcalc_kernel::document::{check_source, elaborate_expr, CheckOptions, CheckReport, Diagnostic};
use dcalc_kernel::norm::norm;
use dcalc_kernel::reduce::trace;
use dcalc_kernel::semantics::beta_nf;
use dcalc_kernel::strategy::{semantic_map, strategies, strategy};
use dcalc_kernel::{check_context, print, synth, Context, Expr, DEFAULT_FUEL};

#[derive(Parser)]
#[command(name = "dcalc", version, about = "Proof checker for the d-calculus")]
struct Cli {
    /// Step budget for reduction and conversion.
    #[arg(long, global = true, env = "DCALC_FUEL", default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Axiom scheme families files may request: `neg`, `cast`.
    #[arg(long, global = true, value_delimiter = ',')]
    axioms: Vec<String>,
    /// Emit JSON lines instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ExprArgs {
    /// Expression in surface syntax.
    expr: String,
    /// Document whose contexts and definitions are in scope.
    #[arg(long)]
    ctx: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check documents: contexts, then every `check` assertion.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Print the synthesized type.
    Type(ExprArgs),
    /// Print the normal form.
    Nf {
        #[command(flatten)]
        e: ExprArgs,
        /// Reduction strategy by name.
        #[arg(long, default_value = "leftmost-outermost")]
        strategy: String,
        /// Also print every step.
        #[arg(long)]
        trace: bool,
    },
    /// Print the leftmost-outermost reduction sequence, one step per line.
    Trace(ExprArgs),
    /// Translate into the untyped lambda calculus.
    Sem {
        #[command(flatten)]
        e: ExprArgs,
        #[arg(long, conflicts_with = "encode", required_unless_present = "encode")]
        strip: bool,
        #[arg(long)]
        encode: bool,
        /// Beta-normalize the image.
        #[arg(long)]
        nf: bool,
    },
    /// Print the norm as a bracket tree.
    Norm(ExprArgs),
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    file: &'a str,
    line: usize,
    kind: &'a str,
    path: &'a str,
    message: &'a str,
    expected: Option<&'a str>,
    found: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    file: &'a str,
    ok: bool,
    declarations_checked: usize,
    deductions_checked: usize,
    errors: usize,
    elapsed_ms: f64,
}

fn families(names: &[String]) -> Result<BTreeSet<Family>> {
    names
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| Family::parse(s.trim()).ok_or_else(|| anyhow!("unknown axiom family `{s}` (expected neg or cast)")))
        .collect()
}

fn emit_report(r: &CheckReport, json: bool) -> Result<()> {
    if json {
        for d in &r.errors {
            let rec = JsonDiagnostic {
                file: &r.file,
                line: d.line,
                kind: d.kind,
                path: &d.path,
                message: &d.message,
                expected: d.expected.as_deref(),
                found: d.found.as_deref(),
            };
            println!("{}", serde_json::to_string(&rec)?);
        }
        let summary = JsonSummary {
            file: &r.file,
            ok: r.ok(),
            declarations_checked: r.declarations_checked,
            deductions_checked: r.deductions_checked,
            errors: r.errors.len(),
            elapsed_ms: r.elapsed.as_secs_f64() * 1e3,
        };
        println!("{}", serde_json::to_string(&summary)?);
    } else {
        for d in &r.errors {
            eprintln!("{}:{d}", r.file);
        }
        println!(
            "{}: {} ({} declarations, {} deductions, {} errors, {:.1} ms)",
            r.file,
            if r.ok() { "ok" } else { "FAILED" },
            r.declarations_checked,
            r.deductions_checked,
            r.errors.len(),
            r.elapsed.as_secs_f64() * 1e3
        );
    }
    Ok(())
}

fn cmd_check(paths: &[PathBuf], opts: &CheckOptions, json: bool) -> Result<bool> {
    let sources: Vec<(String, Result<String>)> = paths
        .iter()
        .map(|p| {
            let src = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()));
            (p.display().to_string(), src)
        })
        .collect();
    // Files are independent; each is checked on its own thread and reported in argument order.
    let reports: Vec<Result<CheckReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = sources
            .iter()
            .map(|(file, src)| {
                s.spawn(move || match src {
                    Ok(src) => Ok(check_source(file, src, opts)),
                    Err(e) => Err(anyhow!("{e:#}")),
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("checker thread panicked")).collect()
    });
    let mut all_ok = true;
    for r in reports {
        let r = r?;
        all_ok &= r.ok();
        emit_report(&r, json)?;
    }
    Ok(all_ok)
}

fn load(e: &ExprArgs, axioms: &BTreeSet<Family>, fuel: u64) -> Result<(Context, Expr)> {
    let ctx_src = match &e.ctx {
        Some(p) => Some(std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    let (ctx, expr) = elaborate_expr(ctx_src.as_deref(), &e.expr, axioms).map_err(|d: Diagnostic| anyhow!("{d}"))?;
    check_context(&ctx, fuel).map_err(|err| anyhow!("context: {err}"))?;
    Ok((ctx, expr))
}

fn output(json: bool, key: &str, value: String) -> Result<()> {
    if json {
        println!("{}", serde_json::json!({ key: value }));
    } else {
        println!("{value}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let axioms = families(&cli.axioms)?;
    let fuel = cli.fuel;
    match &cli.cmd {
        Cmd::Check { paths } => cmd_check(paths, &CheckOptions { fuel, axioms }, cli.json),
        Cmd::Type(e) => {
            let (ctx, expr) = load(e, &axioms, fuel)?;
            let ty = synth(&ctx, &expr, fuel).map_err(|err| anyhow!("{err}"))?;
            output(cli.json, "type", print(&ty))?;
            Ok(true)
        }
        Cmd::Nf { e, strategy: name, trace: show } => {
            let (_, expr) = load(e, &axioms, fuel)?;
            if *show {
                for step in trace(&expr, fuel)?.steps {
                    println!("{step}");
                }
            }
            let s = strategy(name).ok_or_else(|| {
                let known: Vec<&str> = strategies().iter().map(|s| s.name()).collect();
                anyhow!("unknown strategy `{name}` (known: {})", known.join(", "))
            })?;
            output(cli.json, "nf", print(&s.normalize(&expr, fuel)?))?;
            Ok(true)
        }
        Cmd::Trace(e) => {
            let (_, expr) = load(e, &axioms, fuel)?;
            let t = trace(&expr, fuel)?;
            if cli.json {
                for step in &t.steps {
                    let path = dcalc_kernel::expr::render_path(&step.path);
                    let rec =
                        serde_json::json!({ "axiom": step.axiom.name(), "path": path, "term": print(&step.result) });
                    println!("{rec}");
                }
            } else {
                for step in &t.steps {
                    println!("{step}");
                }
            }
            Ok(true)
        }
        Cmd::Sem { e, strip, nf, .. } => {
            let (_, expr) = load(e, &axioms, fuel)?;
            let map = semantic_map(if *strip { "strip" } else { "encode" }).expect("registered");
            let mut t = map.map(&expr);
            if *nf {
                t = beta_nf(&t, fuel)?;
            }
            output(cli.json, "lambda", t.to_string())?;
            Ok(true)
        }
        Cmd::Norm(e) => {
            let (ctx, expr) = load(e, &axioms, fuel)?;
            match norm(&ctx, &expr) {
                Some(n) => output(cli.json, "norm", n.to_string())?,
                None => bail!("expression is not normable"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
