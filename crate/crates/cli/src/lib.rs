//! Command implementations behind the `scale-hilbert` binary.
//!
//! Every command produces a JSON report (plus a CSV mirror for tabular
//! traces) and a pass flag. Reports carry no timing or host data, so a fixed
//! configuration reproduces them byte for byte.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;

use scale_hilbert::hessian::{self, Tolerances};
use scale_hilbert::schema::OperatorSpec;
use scale_hilbert::sobolev::{self, SobolevRow, SobolevTrace};
use scale_hilbert::suite::{self, SuiteConfig};
use scale_hilbert::{TruncatedScaleSpace, Weight};

pub mod ladder;

pub use ladder::{LadderPair, LadderReport};

/// Ladder drift above this fraction flags a growing equivalence constant.
pub const GROWTH_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SobolevDemo,
    HessianAnalyze,
    Ladder,
    VerifyAll,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "scale-hilbert", version, about = "Certificates for truncated scale Hilbert spaces")]
pub struct Args {
    #[arg(long, value_enum)]
    pub command: Command,
    /// Truncation dimension (`nu_max` for the Sobolev demo).
    #[arg(long, visible_alias = "nu-max")]
    pub n: Option<usize>,
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Replaces every default tolerance.
    #[arg(long, env = "SCALE_HILBERT_TOL")]
    pub tol: Option<f64>,
    /// Operator JSON for `hessian-analyze`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Report path; tabular traces are mirrored next to it as `.csv`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated increasing dimensions, e.g. `64,256,1024`.
    #[arg(long, default_value = "64,256,1024")]
    pub ladder: String,
    /// Pair of scales compared by `ladder`.
    #[arg(long, value_enum, default_value_t = LadderPair::SobolevSigma)]
    pub pair: LadderPair,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] scale_hilbert::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: Option<usize>,
    pub k_max: Option<usize>,
    pub tol: Option<f64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub ladder: Vec<usize>,
    pub pair: LadderPair,
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        if let Some(t) = args.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Input(format!("tol must be positive and finite, got {t}")));
            }
        }
        if args.n == Some(0) {
            return Err(CliError::Input("dimension must be at least 1".into()));
        }
        let ladder = parse_ladder(&args.ladder)?;
        Ok(Self {
            command: args.command,
            n: args.n,
            k_max: args.k_max,
            tol: args.tol,
            input: args.input,
            output: args.output,
            seed: args.seed,
            ladder,
            pair: args.pair,
        })
    }
}

pub fn parse_ladder(s: &str) -> Result<Vec<usize>, CliError> {
    let rungs = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("bad ladder entry {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rungs.is_empty() || rungs[0] == 0 || rungs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Input(format!(
            "ladder must be strictly increasing positive dimensions, got {s:?}"
        )));
    }
    Ok(rungs)
}

/// A finished command: the JSON report, an optional CSV mirror, and whether
/// every certificate passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub json: String,
    pub csv: Option<String>,
    pub pass: bool,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, csv: Option<String>, pass: bool) -> Result<Self, CliError> {
        let mut json = serde_json::to_string_pretty(report).map_err(scale_hilbert::Error::from)?;
        json.push('\n');
        Ok(Self { json, csv, pass })
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    /// Writes the report to `path` (CSV mirror beside it), or the JSON to
    /// stdout when no path is given.
    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => {
                std::fs::write(p, &self.json)?;
                if let Some(csv) = &self.csv {
                    std::fs::write(p.with_extension("csv"), csv)?;
                }
            }
            None => print!("{}", self.json),
        }
        Ok(())
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::SobolevDemo => cmd_sobolev_demo(cfg),
        Command::HessianAnalyze => cmd_hessian_analyze(cfg),
        Command::Ladder => ladder::cmd_ladder(cfg),
        Command::VerifyAll => cmd_verify_all(cfg),
    }
}

#[derive(Debug, Serialize)]
pub struct SobolevReport {
    pub tol: f64,
    pub max_relative_delta: f64,
    pub pass: bool,
    #[serde(flatten)]
    pub trace: SobolevTrace,
}

pub fn cmd_sobolev_demo(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let nu_max = cfg.n.unwrap_or(16);
    let k_max = cfg.k_max.unwrap_or(2);
    let k_max = u32::try_from(k_max).map_err(|_| CliError::Input("k_max too large".into()))?;
    let tol = cfg.tol.unwrap_or(scale_hilbert::DEFAULT_TOL);
    let trace = sobolev::sobolev_trace(nu_max, k_max)?;
    let max_relative_delta = trace
        .rows
        .iter()
        .map(|r| r.abs_delta / r.closed_form.abs().max(1.0))
        .fold(0.0, f64::max);
    let pass = max_relative_delta <= tol && trace.max_off_diagonal <= tol;
    let csv = sobolev_csv(&trace.rows)?;
    let report = SobolevReport {
        tol,
        max_relative_delta,
        pass,
        trace,
    };
    Outcome::new(&report, Some(csv), pass)
}

pub fn sobolev_csv(rows: &[SobolevRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Input(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn cmd_hessian_analyze(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::Input("hessian-analyze needs --input".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let spec = OperatorSpec::from_json(&text).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(n) = cfg.n {
        if n != spec.n {
            return Err(CliError::Input(format!("--n {n} disagrees with operator n {}", spec.n)));
        }
    }
    let k_max = cfg.k_max.unwrap_or(2);
    let op = spec
        .into_operator(k_max)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let tol = cfg.tol.map(Tolerances::uniform).unwrap_or_default();
    let report = hessian::analyze(&op, k_max.min(op.scale().k_max()), tol);
    let pass = report.pass;
    Outcome::new(&report, None, pass)
}

pub fn cmd_verify_all(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let report = suite::run_suite(&SuiteConfig {
        seed: cfg.seed,
        tol: cfg.tol,
    })?;
    let pass = report.pass;
    Outcome::new(&report, None, pass)
}

pub(crate) fn sobolev_space(n: usize, k_max: usize) -> TruncatedScaleSpace {
    sobolev::build_sobolev_space(n, k_max)
}

pub(crate) fn sigma_space(n: usize, k_max: usize) -> TruncatedScaleSpace {
    TruncatedScaleSpace::weighted(&Weight::sigma(n), k_max)
}
