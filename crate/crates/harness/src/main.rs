//! Command-line front end.
//!
//! Subcommands: `run` a scenario file, `sweep` a seeded random pair with
//! inline flags, `kato-check` a function descriptor against the axiom
//! battery, `kato-build` a canonical representation printing its budget.
//! Exit codes: 0 success, 1 validation failure, 2 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tklab::emit::emit_all;
use tklab::scenario::{
    load_scenario, GridSpec, HSpec, MetricSpec, OperatorSource, Scenario, SchemeSpec,
};
use tklab::{runner, HarnessError, HarnessResult};
use tklab_core::kato::{build_canonical, AcWeight, KatoFunctionSpec, KatoMeasure, ZeroSet};
use tklab_core::Complex64;

#[derive(Parser)]
#[command(name = "tklab", version, about = "Product-formula convergence laboratory")]
struct Cli {
    /// Worker threads for scenario cells (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario JSON file and write its reports
    Run {
        /// Path to the scenario document
        scenario: PathBuf,
        /// Overwrite existing report files
        #[arg(long)]
        force: bool,
    },
    /// Run an inline seeded sweep without a scenario file
    Sweep(SweepArgs),
    /// Check a Kato-function descriptor against the axiom battery
    KatoCheck {
        /// Path to a function descriptor JSON ({"variant": ...})
        function: PathBuf,
    },
    /// Build a canonical Kato function from zeros + measure, printing
    /// alpha, kappa, beta and validating the budget
    KatoBuild {
        /// Path to a JSON document {"zeros": [[re,im,mult],...],
        /// "atoms": [[s,w],...], "ac_weight": {...}?}
        data: PathBuf,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Matrix dimension
    #[arg(long, default_value_t = 8)]
    dim: usize,
    /// Seed for the operator pair (and derived vectors)
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Scheme: trotter-plain | trotter-symmetrized | lapidus:<k> |
    /// cachia-exp | kato-exp-resolvent:<k> | zeno:<rank> |
    /// real-time-plain | real-time-symmetrized | exact
    #[arg(long, default_value = "trotter-plain")]
    scheme: String,
    /// Largest subdivision count; the sweep runs n = 1, 2, 4, ... up to it
    #[arg(long, default_value_t = 256)]
    n_max: u32,
    /// Time horizon T
    #[arg(long = "T", default_value_t = 1.0)]
    t_horizon: f64,
    /// Metric: l2 | measure:<eta> | sup | chernoff:<j_max>
    #[arg(long, default_value = "l2")]
    metric: String,
    /// Spectral scale of the random operators
    #[arg(long, default_value_t = 1.0)]
    spectral_scale: f64,
    /// Output prefix for <prefix>.report.{csv,json}
    #[arg(long, default_value = "sweep")]
    output: String,
    /// Overwrite existing report files
    #[arg(long)]
    force: bool,
}

fn parse_scheme(text: &str) -> HarnessResult<(SchemeSpec, Option<usize>)> {
    let bad = |detail: String| Err(HarnessError::ConfigParse { detail });
    let (head, arg) = match text.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (text, None),
    };
    let parse_u32 = |a: Option<&str>, what: &str| -> HarnessResult<u32> {
        a.and_then(|s| s.parse().ok())
            .ok_or_else(|| HarnessError::ConfigParse {
                detail: format!("scheme '{text}' needs a positive integer {what}"),
            })
    };
    Ok(match head {
        "trotter-plain" => (SchemeSpec::TrotterPlain, None),
        "trotter-symmetrized" => (SchemeSpec::TrotterSymmetrized, None),
        "real-time-plain" => (SchemeSpec::RealTimePlain, None),
        "real-time-symmetrized" => (SchemeSpec::RealTimeSymmetrized, None),
        "exact" => (SchemeSpec::Exact, None),
        "lapidus" => (
            SchemeSpec::LapidusResolvent {
                k: parse_u32(arg, "k")?,
            },
            None,
        ),
        "cachia-exp" => (
            SchemeSpec::CachiaAverage {
                f: KatoFunctionSpec::Exp,
                g: KatoFunctionSpec::Exp,
            },
            None,
        ),
        "kato-exp-resolvent" => (
            SchemeSpec::KatoProduct {
                f: KatoFunctionSpec::Exp,
                g: KatoFunctionSpec::ResolventPower {
                    k: parse_u32(arg, "k")?,
                },
            },
            None,
        ),
        "zeno" => {
            let rank = parse_u32(arg, "rank")? as usize;
            (SchemeSpec::Zeno, Some(rank))
        }
        other => return bad(format!("unknown scheme '{other}'")),
    })
}

fn parse_metric(text: &str) -> HarnessResult<MetricSpec> {
    let (head, arg) = match text.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (text, None),
    };
    Ok(match head {
        "l2" => MetricSpec::L2,
        "sup" => MetricSpec::Sup,
        "measure" => {
            let eta: f64 = arg
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| HarnessError::ConfigParse {
                    detail: "measure metric needs ':<eta>'".into(),
                })?;
            MetricSpec::Measure { eta }
        }
        "chernoff" => {
            let j_max: i32 = arg
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| HarnessError::ConfigParse {
                    detail: "chernoff metric needs ':<j_max>' for taus 2^-j".into(),
                })?;
            MetricSpec::Chernoff {
                taus: (0..=j_max).map(|j| 2.0_f64.powi(-j)).collect(),
            }
        }
        other => {
            return Err(HarnessError::ConfigParse {
                detail: format!("unknown metric '{other}'"),
            })
        }
    })
}

fn sweep_scenario(args: &SweepArgs) -> HarnessResult<Scenario> {
    let (scheme, zeno_rank) = parse_scheme(&args.scheme)?;
    let metric = parse_metric(&args.metric)?;
    let mut n_values = Vec::new();
    let mut n = 1u32;
    while n <= args.n_max {
        n_values.push(n);
        n = n.saturating_mul(2);
    }
    Ok(Scenario {
        schema: 1,
        operator_source: OperatorSource::RandomPsd {
            dim: args.dim,
            seed: args.seed,
            spectral_scale: args.spectral_scale,
            zeno_rank,
        },
        schemes: vec![scheme],
        n_values,
        t_max: args.t_horizon,
        grid: GridSpec::default(),
        h: HSpec::Random { seed: args.seed },
        metrics: vec![metric],
        output: args.output.clone(),
    })
}

fn cmd_run(scenario_path: &Path, force: bool) -> HarnessResult<()> {
    let scenario = load_scenario(scenario_path)?;
    let record = runner::run(&scenario)?;
    let paths = emit_all(&record, &scenario.output, force)?;
    for path in paths {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> HarnessResult<()> {
    let scenario = sweep_scenario(args)?;
    let record = runner::run(&scenario)?;
    for report in &record.reports {
        println!(
            "# {} {} ({} entries)",
            report.scheme,
            report.metric.label(),
            report.entries.len()
        );
        for e in &report.entries {
            println!("  n={:<6} error={:.8e}", e.index, e.error);
        }
    }
    let paths = emit_all(&record, &scenario.output, args.force)?;
    for path in paths {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_kato_check(path: &Path) -> HarnessResult<()> {
    let text = std::fs::read_to_string(path)?;
    let spec: KatoFunctionSpec =
        serde_json::from_str(&text).map_err(|e| HarnessError::ConfigParse {
            detail: format!("{}: {e}", path.display()),
        })?;
    let handle = spec.build()?;
    let report = handle.check_axioms();
    for check in &report.checks {
        let status = if check.passed { "pass" } else { "FAIL" };
        let witness = check
            .witness
            .map(|(re, im)| format!(" at z = {re}+{im}i"))
            .unwrap_or_default();
        println!(
            "{status}  {:<24} measured {:+.6e}{witness}",
            check.axiom.to_string(),
            check.measured
        );
    }
    if report.all_pass() {
        println!("all axioms pass for {}", handle.tag());
        Ok(())
    } else {
        let failure = report.first_failure().expect("some axiom failed");
        Err(HarnessError::SchemeRejected {
            scheme: handle.tag(),
            axiom: failure.axiom.to_string(),
        })
    }
}

/// Input shape for `kato-build`: the canonical data without the variant tag.
#[derive(serde::Deserialize)]
struct CanonicalInput {
    #[serde(default)]
    zeros: Vec<(f64, f64, u32)>,
    #[serde(default)]
    atoms: Vec<(f64, f64)>,
    #[serde(default)]
    ac_weight: Option<tklab_core::kato::AcWeightSpec>,
}

fn cmd_kato_build(path: &Path) -> HarnessResult<()> {
    let text = std::fs::read_to_string(path)?;
    let input: CanonicalInput =
        serde_json::from_str(&text).map_err(|e| HarnessError::ConfigParse {
            detail: format!("{}: {e}", path.display()),
        })?;
    let zeros = ZeroSet::new(
        input
            .zeros
            .iter()
            .map(|&(re, im, mult)| (Complex64::new(re, im), mult))
            .collect(),
    )?;
    let ac = input
        .ac_weight
        .as_ref()
        .map(AcWeight::from_spec)
        .transpose()?;
    let measure = KatoMeasure::new(input.atoms, ac)?;
    let f = build_canonical(zeros, measure)?;
    println!("kappa = {:.12}", f.kappa());
    println!("beta  = {:.12}", f.beta());
    println!("alpha = {:.12}", f.alpha());
    println!("budget alpha+kappa+beta = {:.12}", f.budget());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: could not size the worker pool: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Run { scenario, force } => cmd_run(scenario, *force),
        Command::Sweep(args) => cmd_sweep(args),
        Command::KatoCheck { function } => cmd_kato_check(function),
        Command::KatoBuild { data } => cmd_kato_build(data),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
