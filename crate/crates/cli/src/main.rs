//! `nondense`: pressure, avoidance sweeps, Bowen dimension and Moran
//! verification from JSON system files.
//!
//! Exit status is 0 on success, 1 when a verification fails, 2 on bad input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use nondense::avoidance::avoidance_pressure_sweep;
use nondense::dimension::{bowen_root, dimension_csv, dimension_sweep};
use nondense::moran::{verify, VerifyOptions};
use nondense::pressure::{entropy_and_integral, gibbs_markov_measure, pressure, pressure_by_words};
use nondense::{Potential, PressureResult};

use nondense_cli::config::{MoranSpec, System, SystemSpec};

#[derive(Parser)]
#[command(name = "nondense", version, about = "Thermodynamic formalism on subshifts of finite type")]
struct Cli {
    /// Worker threads for parallel sweeps; output does not depend on it.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Topological pressure of the system's potential.
    Pressure {
        system: PathBuf,
        /// Also print the word-sum value at this length.
        #[arg(long, value_name = "N")]
        oracle: Option<usize>,
    },
    /// Topological entropy (pressure of the zero potential).
    Entropy {
        system: PathBuf,
        #[arg(long, value_name = "N")]
        oracle: Option<usize>,
    },
    /// The equilibrium Markov chain and its variational defect.
    Gibbs { system: PathBuf },
    /// Pressures of the levels avoiding the n-cylinders of a point, as CSV.
    AvoidSweep {
        system: PathBuf,
        #[arg(long, value_name = "NAME")]
        z0: String,
        #[arg(long, value_name = "K", default_value_t = 10)]
        nmax: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Bowen roots of the avoidance levels, or of the whole space without --z0, as CSV.
    Dimension {
        system: PathBuf,
        #[arg(long, value_name = "NAME")]
        z0: Option<String>,
        #[arg(long, value_name = "K", default_value_t = 10)]
        nmax: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Builds the Moran construction and checks it level by level.
    MoranVerify {
        system: PathBuf,
        #[arg(long, value_name = "FILE")]
        params: PathBuf,
        /// Scan z0's own prefix too; the avoidance check must then fail.
        #[arg(long)]
        inject_adversarial: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

enum Outcome {
    Ok,
    Failed,
}

#[derive(Serialize)]
struct PressureRecord {
    value: f64,
    method: &'static str,
    error_bound: f64,
    iterations: usize,
}

impl From<PressureResult> for PressureRecord {
    fn from(p: PressureResult) -> Self {
        PressureRecord {
            value: p.value,
            method: p.method.as_str(),
            error_bound: p.error_bound,
            iterations: p.iterations,
        }
    }
}

#[derive(Serialize)]
struct GibbsRecord {
    states: Vec<String>,
    stationary: Vec<f64>,
    transition: Vec<Vec<f64>>,
    pressure: f64,
    entropy: f64,
    integral: f64,
    defect: f64,
}

fn load(path: &Path) -> Result<System> {
    SystemSpec::load(path)?
        .resolve()
        .with_context(|| format!("in {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    // serde_json writes non-finite floats as null
    format!("{}\n", serde_json::to_string(v).expect("records serialize"))
}

fn cmd_pressure(sys: &System, phi: &Potential, oracle: Option<usize>) -> Result<Outcome> {
    let mut text = json_line(&PressureRecord::from(pressure(&sys.sft, phi)?));
    if let Some(n) = oracle {
        text.push_str(&json_line(&PressureRecord::from(pressure_by_words(&sys.sft, phi, n)?)));
    }
    emit(None, &text)?;
    Ok(Outcome::Ok)
}

fn cmd_gibbs(sys: &System) -> Result<Outcome> {
    let mu = gibbs_markov_measure(&sys.sft, &sys.phi)?;
    let (h, i) = entropy_and_integral(&mu, &sys.sft, &sys.phi)?;
    let p = pressure(&sys.sft, &sys.phi)?.value;
    let record = GibbsRecord {
        states: mu.states().iter().map(|w| sys.show(w)).collect(),
        stationary: mu.stationary().to_vec(),
        transition: mu.transition_matrix(),
        pressure: p,
        entropy: h,
        integral: i,
        defect: (p - h - i).abs(),
    };
    emit(None, &json_line(&record))?;
    Ok(Outcome::Ok)
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Pressure { system, oracle } => {
            let sys = load(&system)?;
            cmd_pressure(&sys, &sys.phi, oracle)
        }
        Command::Entropy { system, oracle } => {
            let sys = load(&system)?;
            cmd_pressure(&sys, &Potential::zero(&sys.sft), oracle)
        }
        Command::Gibbs { system } => cmd_gibbs(&load(&system)?),
        Command::AvoidSweep { system, z0, nmax, out } => {
            let sys = load(&system)?;
            let sweep = avoidance_pressure_sweep(&sys.sft, &sys.phi, sys.point(&z0)?, nmax)?;
            emit(out.as_deref(), &sweep.to_csv())?;
            Ok(Outcome::Ok)
        }
        Command::Dimension { system, z0, nmax, out } => {
            let sys = load(&system)?;
            let rows = match z0 {
                Some(name) => dimension_sweep(&sys.sft, &sys.phi, sys.point(&name)?, nmax)?,
                None => vec![(0, bowen_root(&sys.sft, &sys.phi)?)],
            };
            emit(out.as_deref(), &dimension_csv(&rows))?;
            Ok(Outcome::Ok)
        }
        Command::MoranVerify {
            system,
            params,
            inject_adversarial,
            out,
        } => {
            let sys = load(&system)?;
            let ms = MoranSpec::load(&params)?;
            let p = ms.resolve(&sys).with_context(|| format!("in {}", params.display()))?;
            let opts = VerifyOptions {
                inject_adversarial: inject_adversarial || ms.inject_adversarial,
            };
            let report = verify(&sys.sft, &sys.phi, &p, opts)?;
            emit(out.as_deref(), &report.to_text())?;
            Ok(if report.passed() { Outcome::Ok } else { Outcome::Failed })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| run(cli)),
            Err(e) => Err(e.into()),
        },
        None => run(cli),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<nondense::Error>(), Some(nondense::Error::Consistency(_))));
            ExitCode::from(if internal { 1 } else { 2 })
        }
    }
}
