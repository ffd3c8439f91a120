use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use hilbert_tomography::config::{Overrides, RunConfig};
use hilbert_tomography::demo::{run_demo, Demo};
use hilbert_tomography::generators::{diagnose, FiducialOperator, UnitaryFamily};
use hilbert_tomography::io::{read_json, write_json};
use hilbert_tomography::operator_space::operators_rank;
use hilbert_tomography::{dual_frame, reconstruct, tomogram, Label, Operator, TomogramTable, TomographicSet, TomographyError};

#[derive(Parser)]
#[command(name = "hilbert-tomo", version, about = "Tomographic sets, dual frames and reconstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dimension or Fock truncation used by demos.
    #[arg(long = "N", global = true)]
    n: Option<usize>,
    /// Pass/fail tolerance, in (0, 1).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for random test operators.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Rank and condition number of a projector set.
    CheckComplete { set: PathBuf },
    /// Tomogram table of an operator on a set.
    Tomogram { set: PathBuf, operator: PathBuf },
    /// Operator from a set and a tomogram table.
    Reconstruct { set: PathBuf, table: PathBuf },
    /// Dual (Gram-Schmidt) operators of a set.
    DualFrame { set: PathBuf },
    /// Joint-commutant diagnostics of a fiducial operator and unitary family.
    CheckIrreducible { family: PathBuf },
    /// Run a worked scenario: spin, discrete, symplectic, photon, squeeze or z2.
    Demo { name: String },
}

#[derive(Deserialize)]
struct FamilyMember {
    label: Label,
    unitary: Operator,
}

#[derive(Deserialize)]
struct FamilyFile {
    fiducial: Operator,
    family: Vec<FamilyMember>,
}

#[derive(Serialize)]
struct CompletenessReport {
    dim: usize,
    count: usize,
    rank: usize,
    complete: bool,
    condition_number: f64,
}

enum Outcome {
    Ok,
    Failed,
}

fn run(cli: Cli) -> Result<Outcome, TomographyError> {
    let overrides = Overrides { n: cli.n, tol: cli.tol, seed: cli.seed, out: cli.out };
    let cfg = RunConfig::load(cli.config.as_deref(), overrides)?;
    let out = cfg.out.as_deref();
    let emit = |value: &dyn erased::Json, ok: bool| -> Result<Outcome, TomographyError> {
        value.write(out)?;
        Ok(if ok { Outcome::Ok } else { Outcome::Failed })
    };
    match cli.command {
        Command::CheckComplete { set } => {
            let set: TomographicSet = read_json(&set)?;
            let rank = operators_rank(set.projectors())?;
            let required = set.dim() * set.dim();
            let report = CompletenessReport {
                dim: set.dim(),
                count: set.len(),
                rank: rank.rank,
                complete: rank.rank == required,
                condition_number: rank.condition_number,
            };
            let ok = report.complete;
            emit(&report, ok)
        }
        Command::Tomogram { set, operator } => {
            let set: TomographicSet = read_json(&set)?;
            let op: Operator = read_json(&operator)?;
            emit(&tomogram(&set, &op)?, true)
        }
        Command::Reconstruct { set, table } => {
            let set: TomographicSet = read_json(&set)?;
            let table: TomogramTable = read_json(&table)?;
            emit(&reconstruct(&dual_frame(&set)?, &table)?, true)
        }
        Command::DualFrame { set } => {
            let set: TomographicSet = read_json(&set)?;
            emit(&dual_frame(&set)?, true)
        }
        Command::CheckIrreducible { family } => {
            let file: FamilyFile = read_json(&family)?;
            let t0 = FiducialOperator::new(file.fiducial)?;
            let fam = UnitaryFamily::new(file.family.into_iter().map(|m| (m.label, m.unitary)).collect())?;
            let report = diagnose(&t0, &fam)?;
            let ok = report.irreducible;
            emit(&report, ok)
        }
        Command::Demo { name } => {
            let demo: Demo = name.parse().map_err(|_| TomographyError::Parse(format!("unknown demo '{name}'")))?;
            let report = run_demo(demo, &cfg)?;
            let ok = report.pass;
            emit(&report, ok)
        }
    }
}

mod erased {
    use super::*;

    /// Object-safe JSON output.
    pub trait Json {
        fn write(&self, out: Option<&Path>) -> Result<(), TomographyError>;
    }

    impl<T: Serialize> Json for T {
        fn write(&self, out: Option<&Path>) -> Result<(), TomographyError> {
            write_json(self, out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(err @ (TomographyError::Parse(_) | TomographyError::Parameter(_))) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
