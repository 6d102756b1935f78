//! `singlab` — command-line analysis of multi-circled singularities.
//!
//! Inputs are `.sing` expressions or `.json` descriptions (monomial
//! exponents, diagram generators, or facets). All exact values print as
//! rational strings "p/q"; approximate fields are tagged `"approx": true`.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use singlab_core::error::Error;
use singlab_core::rat::{format_rat, parse_rat};
use singlab_core::{covolume, mulideal, oracles, set_max_hull_dim, thresholds};

use input::Input;

#[derive(Parser)]
#[command(name = "singlab", version, about = "Exact invariants of multi-circled singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    format: FormatArgs,
}

#[derive(Args, Clone, Copy)]
struct FormatArgs {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit plain text instead of JSON.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an input and print its canonical form.
    Parse { file: PathBuf },
    /// Print the indicator and its diagram (generators, vertices, facets).
    Indicator { file: PathBuf },
    /// Higher Lelong number L_k.
    Lelong {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Log canonical threshold.
    Lct { file: PathBuf },
    /// Minimal monomial generators of the multiplier ideal J(c u).
    Mulideal {
        file: PathBuf,
        /// Scale c as a rational, e.g. "5/6".
        #[arg(long, default_value = "1")]
        scale: String,
    },
    /// Slow independent verifiers.
    Oracle {
        file: PathBuf,
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Full analysis report.
    Analyze {
        file: PathBuf,
        /// Restrict L_k, chain verdicts, and refined bounds to k <= max-k.
        #[arg(long)]
        max_k: Option<usize>,
        /// Also compute multiplier ideal generators at this scale.
        #[arg(long)]
        multiplier_scale: Option<String>,
        /// Include the refined valuative bounds (numeric).
        #[arg(long)]
        refined: bool,
        /// Seed recorded in the report (reserved for sampling oracles).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Monte-Carlo covolume estimate.
    Mc {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lattice-point covolume estimate at a given resolution.
    Lattice {
        #[arg(long, default_value_t = 100)]
        resolution: u64,
    },
    /// Numeric integrability probe at a given lambda.
    Probe {
        #[arg(long)]
        lambda: f64,
        /// Increasing truncation depths, comma-separated.
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,40,60")]
        depths: Vec<f64>,
    },
}

fn main() -> ExitCode {
    if let Ok(d) = std::env::var("SINGLAB_MAX_DIM") {
        match d.parse::<usize>() {
            Ok(d) if d > 0 => set_max_hull_dim(d),
            _ => {
                report_error(&Error::Validation(format!(
                    "SINGLAB_MAX_DIM must be a positive integer, got {d:?}"
                )));
                return ExitCode::from(3);
            }
        }
    }
    let cli = Cli::parse();
    let text = cli.format.text;
    match run(cli.command, text) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(&e);
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::Validation(_) | Error::Domain(_) | Error::Degenerate(_) => 3,
        Error::Capability(_) | Error::UnboundedCovolume(_) => 4,
        Error::NonStabilization(_) => 5,
        Error::Internal(_) => 1,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::Validation(_) => "validation",
        Error::Domain(_) => "domain",
        Error::Degenerate(_) => "degenerate",
        Error::Capability(_) => "capability",
        Error::UnboundedCovolume(_) => "unbounded_covolume",
        Error::NonStabilization(_) => "non_stabilization",
        Error::Internal(_) => "internal",
    }
}

fn report_error(e: &Error) {
    let payload = json!({ "error": { "kind": error_kind(e), "message": e.to_string() } });
    eprintln!("{payload}");
}

fn emit(v: &Value, text: bool) {
    if text {
        print_text(v, "");
    } else {
        println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
    }
}

/// Flattened `key: value` rendering so text mode reports the same values.
fn print_text(v: &Value, prefix: &str) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                print_text(x, &path);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let row: Vec<String> = items.iter().map(plain).collect();
            println!("{prefix}: [{}]", row.join(", "));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                print_text(x, &format!("{prefix}[{i}]"));
            }
        }
        other => println!("{prefix}: {}", plain(other)),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn run(cmd: Command, text: bool) -> singlab_core::Result<()> {
    match cmd {
        Command::Parse { file } => {
            let input = Input::load(&file)?;
            emit(&input.parse_json(), text);
        }
        Command::Indicator { file } => {
            let input = Input::load(&file)?;
            emit(&input.indicator_json()?, text);
        }
        Command::Lelong { file, k } => {
            let p = Input::load(&file)?.diagram()?;
            let v = covolume::lelong_k(&p, k)?;
            emit(&json!({ "k": k, "lelong": format_rat(&v) }), text);
        }
        Command::Lct { file } => {
            let p = Input::load(&file)?.diagram()?;
            let v = thresholds::lct(&p)?;
            let s = v.as_ref().map_or_else(|| "inf".to_owned(), format_rat);
            emit(&json!({ "lct": s }), text);
        }
        Command::Mulideal { file, scale } => {
            let p = Input::load(&file)?.diagram()?;
            let c = parse_rat(&scale)?;
            let gens = mulideal::generators(&p, &c)?;
            emit(&mulideal::generators_json(&c, &gens), text);
        }
        Command::Oracle { file, which } => {
            let p = Input::load(&file)?.diagram()?;
            let out = match which {
                OracleCommand::Mc { samples, seed } => {
                    let estimate = oracles::covol_mc(&p, samples, seed)?;
                    // Binomial standard error of M^n * (outside fraction).
                    let m = p
                        .axis_intercepts()
                        .into_iter()
                        .flatten()
                        .map(|r| singlab_core::rat::rat_to_f64(&r))
                        .fold(0.0f64, f64::max);
                    let vol = m.powi(p.n() as i32);
                    let q = if vol > 0.0 { estimate / vol } else { 0.0 };
                    let stderr = if vol > 0.0 {
                        vol * (q * (1.0 - q) / samples as f64).sqrt()
                    } else {
                        0.0
                    };
                    json!({ "estimate": estimate, "stderr": stderr, "seed": seed, "approx": true })
                }
                OracleCommand::Lattice { resolution } => {
                    let estimate = oracles::covol_lattice(&p, resolution)?;
                    json!({
                        "estimate": format_rat(&estimate),
                        "resolution": resolution,
                        "approx": true,
                    })
                }
                OracleCommand::Probe { lambda, depths } => {
                    oracles::integrability_probe(&p, lambda, &depths)?.to_json()
                }
            };
            emit(&out, text);
        }
        Command::Analyze {
            file,
            max_k,
            multiplier_scale,
            refined,
            seed,
        } => {
            let input = Input::load(&file)?;
            let scale = multiplier_scale.as_deref().map(parse_rat).transpose()?;
            let r = report::analyze(&input, max_k, scale.as_ref(), refined, seed)?;
            emit(&r, text);
        }
    }
    Ok(())
}
