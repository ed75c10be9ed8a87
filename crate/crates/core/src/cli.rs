//! Command-line front end. `run` returns the process exit code.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::certify::certify;
use crate::numeric::fit_slope;
use crate::scenario::{Scenario, ScenarioError, BUILTIN_NAMES};
use crate::simulate::{variation_of_constants_many, SimulateError, Simulator, Trajectory};

pub const EXIT_STABLE: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tsconsensus", version, about = "Leader-following consensus on time scales")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the segment decomposition T0, T1, ... of the time scale.
    Decompose {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Check the stability conditions; exit 0 when a route certifies, 2 otherwise.
    Certify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Integrate the error system and write the trajectory as CSV.
    Simulate {
        #[command(flatten)]
        source: Source,
        /// RK4 step cap on dense runs (overrides config.h).
        #[arg(long)]
        step: Option<f64>,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a built-in scenario as JSON, or list them.
    Example { name: Option<String> },
}

#[derive(Debug, Args)]
pub struct Source {
    #[arg(long, value_name = "PATH", conflicts_with_all = ["example", "all_examples"])]
    pub scenario: Option<PathBuf>,
    #[arg(long, value_name = "NAME", conflicts_with = "all_examples")]
    pub example: Option<String>,
    /// Run every built-in scenario.
    #[arg(long)]
    pub all_examples: bool,
    /// Truncate the time scale here (overrides the scenario's horizon).
    #[arg(long)]
    pub horizon: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("one of --scenario, --example or --all-examples is required")]
    NoSource,
    #[error("--all-examples is not supported by `simulate`")]
    AllExamples,
    #[error("invalid --step {0}: must be positive and finite")]
    Step(f64),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Simulate(#[from] SimulateError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Output of a command: stdout text, stderr text and exit code.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Source {
    fn scenarios(&self) -> Result<Vec<Scenario>, CliError> {
        let mut list = match (&self.scenario, &self.example, self.all_examples) {
            (Some(p), _, _) => vec![Scenario::from_path(p)?],
            (None, Some(n), _) => vec![Scenario::builtin(n)?],
            (None, None, true) => BUILTIN_NAMES
                .iter()
                .map(|n| Scenario::builtin(n))
                .collect::<Result<_, _>>()?,
            (None, None, false) => return Err(CliError::NoSource),
        };
        if let Some(h) = self.horizon {
            list.iter_mut().for_each(|s| s.horizon = Some(h));
        }
        Ok(list)
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    match cmd {
        Command::Decompose { source, json } => {
            let mut all = Vec::new();
            for s in source.scenarios()? {
                let d = s.window()?.decompose();
                if *json {
                    all.push(serde_json::json!({ "scenario": s.name, "decomposition": d }));
                } else {
                    let _ = writeln!(out.stdout, "# {}\n{}\n{}", s.name, d, d.report());
                }
            }
            if *json {
                out.stdout = pretty(&all) + "\n";
            }
        }
        Command::Certify { source, json } => {
            let mut certs = Vec::new();
            for s in source.scenarios()? {
                let ts = s.window()?;
                let sys = s.system()?;
                certs.push(certify(&s.name, &sys, &ts, &s.config.thresholds));
            }
            out.code = if certs.iter().all(|c| c.is_stable()) {
                EXIT_STABLE
            } else {
                EXIT_INCONCLUSIVE
            };
            if *json {
                out.stdout = pretty(&certs) + "\n";
            } else {
                out.stdout = certs.iter().map(|c| c.text_report()).collect::<Vec<_>>().join("\n");
            }
        }
        Command::Simulate {
            source,
            step,
            out: path,
        } => {
            if source.all_examples {
                return Err(CliError::AllExamples);
            }
            let s = source.scenarios()?.remove(0);
            let h = step.unwrap_or(s.config.h);
            if !(h > 0.0 && h.is_finite()) {
                return Err(CliError::Step(h));
            }
            let ts = s.window()?;
            let sys = s.system()?;
            let traj = Simulator::new(&sys, &ts, s.config.dense_samples)?.run(h)?;
            let mut summary = simulation_summary(&s.name, &traj);
            if sys.dynamics.affine_coefficient(ts.start()).is_some() {
                let times: Vec<f64> = traj.samples.iter().map(|x| x.t).collect();
                let voc = variation_of_constants_many(&sys, &ts, &times)?;
                let _ = writeln!(summary, "variation-of-constants deviation: {:.3e}", voc_deviation(&traj, &voc));
            }
            let csv = traj.to_csv();
            match path {
                Some(p) => {
                    std::fs::write(p, csv).map_err(|source| CliError::Io {
                        path: p.display().to_string(),
                        source,
                    })?;
                    out.stdout = summary;
                }
                None => {
                    out.stdout = csv;
                    out.stderr = summary;
                }
            }
        }
        Command::Example { name: None } => {
            for n in BUILTIN_NAMES {
                let s = Scenario::builtin(n)?;
                let _ = writeln!(out.stdout, "{n:<14} {}", s.description.unwrap_or_default());
            }
        }
        Command::Example { name: Some(n) } => {
            out.stdout = Scenario::builtin(n)?.to_json() + "\n";
        }
    }
    Ok(out)
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

/// Largest `‖run − voc‖ / (1 + ‖voc‖)` over the samples.
pub fn voc_deviation(traj: &Trajectory, voc: &[Vec<f64>]) -> f64 {
    traj.samples
        .iter()
        .zip(voc)
        .map(|(s, v)| {
            let diff: Vec<f64> = s.eps.iter().zip(v).map(|(a, b)| a - b).collect();
            crate::numeric::norm2(&diff) / (1.0 + crate::numeric::norm2(v))
        })
        .fold(0.0, f64::max)
}

/// Decays when the final norm is below the initial one and ln‖eps‖ has a
/// negative least-squares slope in t.
pub fn decays(traj: &Trajectory) -> bool {
    let (ts, ys): (Vec<f64>, Vec<f64>) = traj
        .samples
        .iter()
        .filter(|s| s.eps_norm > 0.0)
        .map(|s| (s.t, s.eps_norm.ln()))
        .unzip();
    traj.final_norm() < traj.eps0_norm && fit_slope(&ts, &ys).is_some_and(|k| k < 0.0)
}

fn simulation_summary(name: &str, traj: &Trajectory) -> String {
    let mut s = String::new();
    let last_t = traj.samples.last().map_or(f64::NAN, |x| x.t);
    let _ = writeln!(s, "scenario: {name}");
    let _ = writeln!(s, "samples: {} (t from {} to {last_t})", traj.samples.len(), traj.samples.first().map_or(f64::NAN, |x| x.t));
    let _ = writeln!(s, "initial norm: {:.6e}", traj.eps0_norm);
    let _ = writeln!(s, "final norm: {:.6e}", traj.final_norm());
    let _ = writeln!(s, "empirical c: {:.6e}", traj.empirical_c());
    let verdict = if traj.eps0_norm == 0.0 {
        "at equilibrium"
    } else if decays(traj) {
        "decaying"
    } else {
        "not decaying"
    };
    let _ = writeln!(s, "decay: {verdict}");
    s
}

/// Parses `args` (program name first), runs, and prints. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_STABLE };
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let _ = std::io::stdout().write_all(o.stdout.as_bytes());
            let _ = std::io::stderr().write_all(o.stderr.as_bytes());
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
