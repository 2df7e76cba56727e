//! Command-line front end: evaluate torsion classes, inspect seminorm data,
//! print derivation traces and run the consistency suites.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use l2alex::cache::{cache_key, trace_digest, Cache, CacheEntry};
use l2alex::check::run_checks;
use l2alex::dsl::{canonical_source, parse};
use l2alex::{
    build_link, detect_split, dual_ball, evaluate, seminorm_report, torsion, CoefficientVector,
    LinkObject, LinkSpec, TorsionClass, TraceNode,
};

#[derive(Parser)]
#[command(
    name = "l2alex",
    version,
    about = "Symbolic L2-Alexander torsion classes for iterated torus links"
)]
struct Cli {
    /// Emit machine-readable JSON
    #[arg(long, global = true)]
    json: bool,

    /// Disable the result cache
    #[arg(long, global = true)]
    no_cache: bool,

    /// Cache file (default: $L2ALEX_CACHE, else ./l2alex-cache.jsonl)
    #[arg(long, global = true, value_name = "PATH")]
    cache_path: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the torsion class of a link expression
    Eval {
        expr: String,
        /// Multi-link coefficients n1,n2,… for evaluating the exponent
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<i64>>,
    },
    /// Seminorm report for the exponent of a link expression
    Norm { expr: String },
    /// Dual-ball vertices of a seminorm exponent (dimension at most 3)
    Ball {
        expr: String,
        #[arg(long, value_enum, default_value_t = BallFormat::Text)]
        format: BallFormat,
    },
    /// Print the derivation trace with formula tags
    Explain { expr: String },
    /// Run the cross-derivation consistency suites over a parameter grid
    Check {
        /// Grid radius for the parameter sweeps
        #[arg(long, default_value_t = 3)]
        grid: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BallFormat {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            if cli.json {
                println!("{}", json!({ "error": format!("{err:#}") }));
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Eval { expr, coeffs } => cmd_eval(cli, expr, coeffs.as_deref()),
        Command::Norm { expr } => cmd_norm(cli, expr),
        Command::Ball { expr, format } => cmd_ball(cli, expr, *format),
        Command::Explain { expr } => cmd_explain(cli, expr),
        Command::Check { grid } => cmd_check(cli, *grid),
    }
}

fn parse_and_build(expr: &str) -> Result<(LinkSpec, LinkObject)> {
    let program = parse(expr)?;
    let obj = build_link(program.spec.clone()).with_context(|| format!("cannot build `{expr}`"))?;
    Ok((program.spec, obj))
}

struct Computed {
    torsion: TorsionClass,
    cached: bool,
    warnings: Vec<String>,
}

/// Computes the torsion, going through the cache unless disabled.
fn torsion_cached(cli: &Cli, spec: &LinkSpec, obj: &LinkObject) -> Result<Computed> {
    let mut warnings: Vec<String> = obj.warnings().to_vec();
    let cache = if cli.no_cache {
        None
    } else {
        Some(Cache::at(
            cli.cache_path.clone().unwrap_or_else(Cache::default_path),
        ))
    };
    let key = cache_key(spec);
    if let Some(cache) = &cache {
        let (hit, cache_warnings) = cache.lookup(&key);
        warnings.extend(cache_warnings);
        if let Some(entry) = hit {
            return Ok(Computed {
                torsion: entry.torsion,
                cached: true,
                warnings,
            });
        }
    }
    let (torsion, trace) = torsion(obj, &CoefficientVector::symbolic())?;
    warnings.extend(trace.warnings());
    if let Some(cache) = &cache {
        let entry = CacheEntry {
            key,
            torsion: torsion.clone(),
            trace_digest: trace_digest(&trace),
        };
        if let Err(e) = cache.store(&entry) {
            warnings.push(format!("cache write failed ({e}); result not stored"));
        }
    }
    Ok(Computed {
        torsion,
        cached: false,
        warnings,
    })
}

fn exponent_json(t: &TorsionClass) -> serde_json::Value {
    match t.exponent() {
        None => serde_json::Value::Null,
        Some(e) => json!({
            "num_vars": e.num_vars(),
            "terms": e.terms().iter().map(|term| json!({
                "coeff": term.coeff,
                "form": term.form,
            })).collect::<Vec<_>>(),
        }),
    }
}

fn cmd_eval(cli: &Cli, expr: &str, coeffs: Option<&[i64]>) -> Result<ExitCode> {
    let (spec, obj) = parse_and_build(expr)?;
    let computed = torsion_cached(cli, &spec, &obj)?;
    let evaluation = match (coeffs, computed.torsion.exponent()) {
        (Some(n), Some(e)) => Some(evaluate(e, n)?),
        _ => None,
    };
    if cli.json {
        println!(
            "{}",
            json!({
                "link": canonical_source(&spec),
                "components": obj.num_components(),
                "zero": computed.torsion.is_zero(),
                "torsion": computed.torsion.to_string(),
                "exponent": exponent_json(&computed.torsion),
                "evaluation": evaluation,
                "warnings": computed.warnings,
                "cached": computed.cached,
            })
        );
    } else {
        println!("link: {}", canonical_source(&spec));
        println!("components: {}", obj.num_components());
        println!("torsion: {}", computed.torsion);
        match computed.torsion.exponent() {
            Some(e) => println!("exponent: {e}"),
            None => println!("exponent: (vanishing torsion class)"),
        }
        if let (Some(n), Some(v)) = (coeffs, evaluation) {
            let ns: Vec<String> = n.iter().map(i64::to_string).collect();
            println!("evaluation at n = ({}): {v}", ns.join(", "));
        }
        if computed.cached {
            println!("(cached result)");
        }
        for w in &computed.warnings {
            println!("warning: {w}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_norm(cli: &Cli, expr: &str) -> Result<ExitCode> {
    let (spec, obj) = parse_and_build(expr)?;
    let computed = torsion_cached(cli, &spec, &obj)?;
    let exponent = computed
        .torsion
        .exponent()
        .ok_or_else(|| anyhow!("the torsion class vanishes; there is no exponent to analyze"))?;
    let report = seminorm_report(exponent);
    if cli.json {
        println!(
            "{}",
            json!({
                "link": canonical_source(&spec),
                "exponent": exponent_json(&computed.torsion),
                "is_seminorm": report.is_seminorm,
                "degenerate_directions": report.degenerate_directions,
                "warnings": computed.warnings,
            })
        );
    } else {
        println!("link: {}", canonical_source(&spec));
        println!("exponent: {exponent}");
        println!(
            "seminorm: {}",
            if report.is_seminorm { "yes" } else { "no" }
        );
        if report.degenerate_directions.is_empty() {
            println!("degenerate directions: none");
        } else {
            for d in &report.degenerate_directions {
                let ds: Vec<String> = d.iter().map(i64::to_string).collect();
                println!("degenerate direction: ({})", ds.join(", "));
            }
        }
        for w in &computed.warnings {
            println!("warning: {w}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ball(cli: &Cli, expr: &str, format: BallFormat) -> Result<ExitCode> {
    let (spec, obj) = parse_and_build(expr)?;
    let computed = torsion_cached(cli, &spec, &obj)?;
    let exponent = computed
        .torsion
        .exponent()
        .ok_or_else(|| anyhow!("the torsion class vanishes; there is no exponent to analyze"))?;
    let ball = dual_ball(exponent)?;
    if cli.json || format == BallFormat::Json {
        println!("{}", json!({ "vertices": ball.vertices }));
    } else {
        println!("link: {}", canonical_source(&spec));
        println!("exponent: {exponent}");
        for g in &ball.generators {
            let gs: Vec<String> = g.iter().map(i64::to_string).collect();
            println!("generator: ({})", gs.join(", "));
        }
        for v in &ball.vertices {
            let vs: Vec<String> = v.iter().map(i64::to_string).collect();
            println!("vertex: ({})", vs.join(", "));
        }
        for w in &computed.warnings {
            println!("warning: {w}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn trace_json(node: &TraceNode) -> serde_json::Value {
    json!({
        "rule": node.op.rule(),
        "detail": node.detail,
        "assumes": node.side_conditions,
        "warnings": node.warnings,
        "result": node.result.to_string(),
        "children": node.children.iter().map(trace_json).collect::<Vec<_>>(),
    })
}

fn cmd_explain(cli: &Cli, expr: &str) -> Result<ExitCode> {
    let (spec, obj) = parse_and_build(expr)?;
    // always recompute: the cache stores exponents, not traces
    let (torsion, trace) = torsion(&obj, &CoefficientVector::symbolic())?;
    let split = detect_split(&obj);
    if cli.json {
        println!(
            "{}",
            json!({
                "link": canonical_source(&spec),
                "torsion": torsion.to_string(),
                "splitness": format!("{:?}", split.splitness),
                "trace": trace_json(&trace.root),
                "warnings": trace.warnings(),
            })
        );
    } else {
        println!("link: {}", canonical_source(&spec));
        println!("splitness: {:?} ({})", split.splitness, split.detail);
        println!("torsion: {torsion}");
        print!("{}", trace.render());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(cli: &Cli, grid: i64) -> Result<ExitCode> {
    if grid < 1 {
        return Err(anyhow!("grid radius must be at least 1"));
    }
    let report = run_checks(grid);
    if cli.json {
        println!(
            "{}",
            json!({
                "grid": report.grid,
                "passed": report.passed(),
                "suites": report.suites.iter().map(|s| json!({
                    "name": s.name,
                    "cases": s.cases,
                    "failures": s.failures,
                })).collect::<Vec<_>>(),
            })
        );
    } else {
        print!("{}", report.render());
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
