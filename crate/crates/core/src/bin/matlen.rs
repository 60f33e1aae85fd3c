//! Command-line front end: one verb per concept.
//!
//! Exit code 0 means every requested computation completed; a system that
//! turns out not to generate is a successful (and reported) outcome, not an
//! error. Nonzero exit codes are reserved for invalid input, I/O failures
//! and numerical breakdowns.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use matlen::channels::{channel_report, Dichotomy, KrausChannel};
use matlen::ensembles::{random_peps_tensor, RngSpec};
use matlen::lab::{
    emit_csv, emit_plot, parse_matrices, run_experiment, ExperimentConfig, ExperimentKind,
    Observation,
};
use matlen::liespan::{lie_length, LieGeneratingSystem, LieLengthValue, SuElement};
use matlen::numkernel::Tolerance;
use matlen::tensornets::{
    mps_injectivity_index, peps_injective, string_bond_tensor, InjectivityIndex, MpsTensor,
};
use matlen::wordspan::{length, wie_length, LengthValue};

#[derive(Parser)]
#[command(
    name = "matlen",
    version,
    about = "Lengths of matrix generating systems: Wie-length, length, Lie-length, \
             channel primitivity indices and tensor-network injectivity"
)]
struct Cli {
    /// Base seed for all random draws (env: MATLEN_SEED).
    #[arg(long, global = true, env = "MATLEN_SEED", default_value_t = 0)]
    seed: u64,
    /// Relative rank tolerance override (default 1e-9).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write a machine-readable JSON result here.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Write experiment rows as CSV here.
    #[arg(long, global = true)]
    csv_out: Option<PathBuf>,
    /// Write an SVG scaling plot here.
    #[arg(long, global = true)]
    plot_out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Wie-length of the matrix tuple in a JSON file.
    WieLength { input: PathBuf },
    /// Length (identity allowed as a letter) of the matrix tuple.
    Length { input: PathBuf },
    /// Lie-length of traceless skew-Hermitian matrices in a JSON file.
    LieLength { input: PathBuf },
    /// Channel diagnostics for the Kraus tuple in a JSON file.
    Channel { input: PathBuf },
    /// MPS injectivity index of the bond-matrix tuple in a JSON file.
    Mps { input: PathBuf },
    /// PEPS injectivity at a given region side, for a seeded random tensor
    /// or a string-bond tensor assembled from two matrix files.
    Peps {
        /// Bond dimension (random tensor mode).
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Physical dimension (random tensor mode).
        #[arg(long, default_value_t = 4)]
        g: usize,
        /// Region side L.
        #[arg(long, default_value_t = 2)]
        region: usize,
        /// Two JSON files with the string-bond factors B and B-tilde.
        #[arg(long, num_args = 2, value_names = ["B", "BTILDE"])]
        factors: Option<Vec<PathBuf>>,
    },
    /// Scaling sweep over a random ensemble; use --csv-out / --plot-out.
    Experiment {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Comma-separated list of dimensions n.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Comma-separated list of tuple sizes g.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        g: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    WieScaling,
    LieScaling,
    ChannelScaling,
    PepsGeneric,
    WorstCase,
}

impl From<KindArg> for ExperimentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::WieScaling => ExperimentKind::WieScaling,
            KindArg::LieScaling => ExperimentKind::LieScaling,
            KindArg::ChannelScaling => ExperimentKind::ChannelScaling,
            KindArg::PepsGeneric => ExperimentKind::PepsGeneric,
            KindArg::WorstCase => ExperimentKind::WorstCase,
        }
    }
}

fn tolerance(cli: &Cli) -> matlen::Result<Tolerance> {
    let mut tol = Tolerance::default();
    if let Some(r) = cli.tol {
        tol.rank_rel = r;
    }
    tol.validate()?;
    Ok(tol)
}

fn length_value_json(v: LengthValue) -> serde_json::Value {
    match v {
        LengthValue::Finite(k) => json!(k),
        LengthValue::NotGenerating => json!("inf"),
    }
}

fn finish(cli: &Cli, summary: serde_json::Value) -> matlen::Result<()> {
    if let Some(path) = &cli.json_out {
        let text = serde_json::to_string_pretty(&summary).expect("serializable");
        std::fs::write(path, text).map_err(|source| matlen::Error::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

fn run(cli: &Cli) -> matlen::Result<()> {
    let tol = tolerance(cli)?;
    match &cli.cmd {
        Cmd::WieLength { input } => {
            let sys = parse_matrices(input)?;
            let rep = wie_length(&sys, None, &tol)?;
            match rep.value {
                LengthValue::Finite(k) => println!("wie-length = {k}"),
                LengthValue::NotGenerating => println!("wie-length = inf (not generating)"),
            }
            println!("dims per exact length: {:?}", rep.dims_per_step);
            if let Some(words) = &rep.witness_words {
                println!("witness words ({} of length {}):", words.len(), words[0].len());
                for w in words {
                    println!("  {w:?}");
                }
            }
            finish(
                cli,
                json!({
                    "command": "wie-length",
                    "n": sys.n(),
                    "g": sys.g(),
                    "value": length_value_json(rep.value),
                    "dims_per_step": rep.dims_per_step,
                    "witness_words": rep.witness_words,
                }),
            )
        }
        Cmd::Length { input } => {
            let sys = parse_matrices(input)?;
            let rep = length(&sys, &tol)?;
            match rep.value {
                LengthValue::Finite(k) => println!("length = {k}"),
                LengthValue::NotGenerating => println!("length = inf (not generating)"),
            }
            println!("cumulative dims: {:?}", rep.dims_per_step);
            finish(
                cli,
                json!({
                    "command": "length",
                    "n": sys.n(),
                    "g": sys.g(),
                    "value": length_value_json(rep.value),
                    "dims_per_step": rep.dims_per_step,
                }),
            )
        }
        Cmd::LieLength { input } => {
            let sys = parse_matrices(input)?;
            let elems = sys
                .mats()
                .iter()
                .cloned()
                .map(SuElement::new)
                .collect::<matlen::Result<Vec<_>>>()?;
            let rep = lie_length(&LieGeneratingSystem::new(elems)?, None, &tol)?;
            match rep.value {
                LieLengthValue::Finite(k) => println!("lie-length = {k}"),
                LieLengthValue::NotGenerating => println!("lie-length = inf (not generating)"),
            }
            println!("cumulative dims per depth: {:?}", rep.dims_per_depth);
            finish(
                cli,
                json!({
                    "command": "lie-length",
                    "n": sys.n(),
                    "g": sys.g(),
                    "value": match rep.value {
                        LieLengthValue::Finite(k) => json!(k),
                        LieLengthValue::NotGenerating => json!("inf"),
                    },
                    "dims_per_depth": rep.dims_per_depth,
                }),
            )
        }
        Cmd::Channel { input } => {
            let sys = parse_matrices(input)?;
            let e = KrausChannel::new(sys.mats().to_vec())?;
            let rep = channel_report(&e, &tol)?;
            match rep.kraus_rank_index {
                LengthValue::Finite(k) => println!("full-kraus-rank index i(A) = {k}"),
                LengthValue::NotGenerating => println!("not primitive (index = inf)"),
            }
            println!("strongly irreducible: {}", rep.strongly_irreducible);
            println!("fixed-point rank: {}", rep.fixed_point_rank);
            match rep.dichotomy {
                Dichotomy::CapacityAtLeastOne => println!("zero-error capacity >= 1 at every power"),
                Dichotomy::CapacityZeroAtIndex(q) => {
                    println!("zero-error capacity = 0 from power {q} on")
                }
                Dichotomy::Inapplicable => {
                    println!("dichotomy inapplicable (fixed point not full rank)")
                }
            }
            finish(
                cli,
                json!({
                    "command": "channel",
                    "n": e.n(),
                    "g": e.g(),
                    "kraus_rank_index": length_value_json(rep.kraus_rank_index),
                    "strongly_irreducible": rep.strongly_irreducible,
                    "fixed_point_rank": rep.fixed_point_rank,
                    "dichotomy": format!("{:?}", rep.dichotomy),
                }),
            )
        }
        Cmd::Mps { input } => {
            let sys = parse_matrices(input)?;
            let t = MpsTensor::new(sys);
            let idx = mps_injectivity_index(&t, &tol)?;
            match idx {
                InjectivityIndex::Finite(l) => println!("injectivity index = {l}"),
                InjectivityIndex::NeverInjective => println!("never injective"),
            }
            finish(
                cli,
                json!({
                    "command": "mps",
                    "n": t.n(),
                    "g": t.g(),
                    "injectivity_index": match idx {
                        InjectivityIndex::Finite(l) => json!(l),
                        InjectivityIndex::NeverInjective => json!("inf"),
                    },
                }),
            )
        }
        Cmd::Peps {
            n,
            g,
            region,
            factors,
        } => {
            let tensor = match factors {
                Some(paths) => {
                    let b = parse_matrices(&paths[0])?;
                    let bt = parse_matrices(&paths[1])?;
                    string_bond_tensor(b.n(), b.g(), &b, &bt)?
                }
                None => random_peps_tensor(*n, *g, &RngSpec::new(cli.seed, 0)),
            };
            let rep = peps_injective(&tensor, *region, &tol)?;
            println!(
                "gamma rank {} of {} at L = {} -> {}",
                rep.gamma_rank,
                rep.full_rank_target,
                region,
                if rep.injective { "injective" } else { "not injective" }
            );
            finish(
                cli,
                json!({
                    "command": "peps",
                    "n": tensor.n(),
                    "g": tensor.g(),
                    "region_side": region,
                    "gamma_rank": rep.gamma_rank,
                    "full_rank_target": rep.full_rank_target,
                    "injective": rep.injective,
                }),
            )
        }
        Cmd::Experiment { kind, n, g, trials } => {
            let cfg = ExperimentConfig {
                kind: (*kind).into(),
                n_range: n.clone(),
                g_range: g.clone(),
                trials: *trials,
                seed: cli.seed,
                tol: Some(tol),
            };
            let rows = run_experiment(&cfg)?;
            let violations: Vec<_> = rows
                .iter()
                .filter(|r| {
                    matches!(
                        cfg.kind,
                        ExperimentKind::WieScaling | ExperimentKind::ChannelScaling
                    ) && !r.within_bounds()
                })
                .collect();
            for r in &rows {
                println!(
                    "n={} g={} trial={} observed={} bounds=[{}, {}] wall_ms={}",
                    r.n, r.g, r.trial, r.observed, r.lower_bound, r.upper_bound_generic, r.wall_ms
                );
            }
            if violations.is_empty() {
                println!("summary: {} rows, all bound checks passed", rows.len());
            } else {
                println!(
                    "summary: {} rows, FAILED bound checks on {} rows",
                    rows.len(),
                    violations.len()
                );
            }
            if let Some(path) = &cli.csv_out {
                emit_csv(&rows, path)?;
                println!("csv written to {}", path.display());
            }
            if let Some(path) = &cli.plot_out {
                emit_plot(&rows, path)?;
                println!("plot written to {}", path.display());
            }
            let failed = !violations.is_empty();
            finish(
                cli,
                json!({
                    "command": "experiment",
                    "kind": cfg.kind.name(),
                    "rows": rows.iter().map(|r| json!({
                        "n": r.n,
                        "g": r.g,
                        "trial": r.trial,
                        "observed": match r.observed {
                            Observation::Value(v) => json!(v),
                            Observation::NotGenerating => json!("inf"),
                            Observation::Timeout => json!("timeout"),
                        },
                        "lower_bound": r.lower_bound,
                        "upper_bound_generic": r.upper_bound_generic,
                        "wall_ms": r.wall_ms,
                    })).collect::<Vec<_>>(),
                    "bound_checks_passed": !failed,
                }),
            )?;
            if failed {
                return Err(matlen::Error::Inconsistent(
                    "bound sandwich violated on generic rows".into(),
                ));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
