//! The three commands and their exit-code contract.

use std::path::PathBuf;

use qhgeo::geodesics::GeodesicResult;
use qhgeo::normed_spaces::{modulus_convexity, modulus_smoothness, ModulusEstimate};
use qhgeo::{solve_geodesic, Error};

use crate::config::{ConfigError, Expect, ModulusChoice, RunConfig, Suite};
use crate::io::{num, opt, Outputs, Svg, Table};
use crate::suites::{self, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Moduli,
    Geodesic,
    Verify,
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    /// A verification suite did not come out as expected.
    VerifyFailed = 1,
    Config = 2,
    NotConverged = 3,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Config(ConfigError),
    Numerical(String),
}

impl Failure {
    pub fn status(&self) -> ExitStatus {
        match self {
            Failure::Config(_) => ExitStatus::Config,
            Failure::Numerical(_) => ExitStatus::NotConverged,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "configuration error: {e}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

/// Library errors caused by the inputs count as configuration errors, the
/// rest as numerical failures.
pub(crate) fn classify(key: &str, e: Error) -> Failure {
    match e {
        Error::Degenerate(_) | Error::NoPath => Failure::Numerical(e.to_string()),
        _ => Failure::Config(ConfigError::new(key, e.to_string())),
    }
}

/// Outputs and status of a successful run.
#[derive(Debug)]
pub struct RunReport {
    pub status: ExitStatus,
    /// Human-readable summary lines.
    pub summary: Vec<String>,
    pub outputs: Outputs,
    pub dir: PathBuf,
}

/// Runs `command` on `cfg` without touching the file system.
pub fn execute(cfg: &RunConfig, command: Command, suite: Option<Suite>) -> Result<RunReport, Failure> {
    if cfg.scenario.is_empty() || cfg.scenario.contains(['/', '\\']) || cfg.scenario.starts_with('.') {
        return Err(ConfigError::new("scenario", "must be a plain, non-empty file name").into());
    }
    let dir = cfg.out.join(&cfg.scenario);
    let (status, summary, outputs) = match command {
        Command::Moduli => moduli(cfg)?,
        Command::Geodesic => geodesic(cfg)?,
        Command::Verify => verify(cfg, suite)?,
    };
    Ok(RunReport { status, summary, outputs, dir })
}

type Ran = (ExitStatus, Vec<String>, Outputs);

fn moduli(cfg: &RunConfig) -> Result<Ran, Failure> {
    let spec = cfg.moduli.as_ref().ok_or_else(|| ConfigError::new("moduli", "missing table"))?;
    let norm = cfg.norm.build()?;
    let dim = norm.dim();
    let mut header = vec!["modulus".to_string(), "argument".into(), "estimate".into()];
    header.extend((1..=dim).map(|k| format!("witness_x{k}")));
    header.extend((1..=dim).map(|k| format!("witness_y{k}")));
    let mut table = Table::new(&header);
    let name = match spec.modulus {
        ModulusChoice::Convexity => "convexity",
        ModulusChoice::Smoothness => "smoothness",
    };
    let mut summary = Vec::new();
    for &arg in &spec.arguments {
        let est: ModulusEstimate = match spec.modulus {
            ModulusChoice::Convexity => modulus_convexity(&norm, arg, spec.budget, cfg.seed),
            ModulusChoice::Smoothness => modulus_smoothness(&norm, arg, spec.budget, cfg.seed),
        }
        .map_err(|e| classify("moduli", e))?;
        let mut row = vec![name.to_string(), num(arg), num(est.value)];
        row.extend(est.witness.0.iter().map(|&x| num(x)));
        row.extend(est.witness.1.iter().map(|&x| num(x)));
        table.push(row);
        summary.push(format!("{name}({}) = {}", num(arg), num(est.value)));
    }
    let mut out = Outputs::default();
    out.table("moduli.csv", &table);
    Ok((ExitStatus::Ok, summary, out))
}

pub(crate) fn path_outputs(out: &mut Outputs, prefix: &str, r: &GeodesicResult) {
    let dim = r.path.start().len();
    let mut header = vec!["index".to_string()];
    header.extend((1..=dim).map(|k| format!("x{k}")));
    header.push("cumulative_length".into());
    let mut path = Table::new(&header);
    for (i, (v, c)) in r.path.vertices().iter().zip(r.path.cumulative_lengths()).enumerate() {
        let mut row = vec![i.to_string()];
        row.extend(v.iter().map(|&x| num(x)));
        row.push(num(*c));
        path.push(row);
    }
    out.table(&format!("{prefix}path.csv"), &path);

    let mut levels = Table::new(&["level", "vertex_count", "length", "max_turning_angle"]);
    for (i, l) in r.refinement_history.iter().enumerate() {
        levels.push(vec![i.to_string(), l.vertex_count.to_string(), num(l.length), opt(l.max_turning_angle)]);
    }
    out.table(&format!("{prefix}levels.csv"), &levels);

    if dim == 2 {
        let mut svg = Svg::new();
        svg.polyline(r.path.vertices(), "black", false);
        svg.circle(r.path.start(), 3.0, "blue");
        svg.circle(r.path.end(), 3.0, "red");
        out.text(&format!("{prefix}path.svg"), svg.render());
    }
}

fn geodesic(cfg: &RunConfig) -> Result<Ran, Failure> {
    let spec = cfg.geodesic.as_ref().ok_or_else(|| ConfigError::new("geodesic", "missing table"))?;
    let weight = cfg.build_weight()?;
    let r = solve_geodesic(&weight, &spec.x, &spec.y, &cfg.solver_config()).map_err(|e| classify("geodesic", e))?;
    let mut out = Outputs::default();
    path_outputs(&mut out, "", &r);
    let mut summary = Table::new(&[
        "upper_bound",
        "lower_bound",
        "vertices",
        "iterations",
        "converged",
        "tie_broken",
    ]);
    summary.push(vec![
        num(r.upper_bound),
        num(r.lower_bound),
        r.path.vertex_count().to_string(),
        r.iterations.to_string(),
        r.converged.to_string(),
        r.tie_broken.to_string(),
    ]);
    out.table("summary.csv", &summary);
    let mut lines = vec![format!(
        "upper bound {}, lower bound {}, {} vertices",
        num(r.upper_bound),
        num(r.lower_bound),
        r.path.vertex_count()
    )];
    let status = if r.converged {
        ExitStatus::Ok
    } else {
        lines.push("refinement did not converge".into());
        ExitStatus::NotConverged
    };
    Ok((status, lines, out))
}

fn verify(cfg: &RunConfig, suite: Option<Suite>) -> Result<Ran, Failure> {
    let spec = cfg.verify.as_ref().ok_or_else(|| ConfigError::new("verify", "missing table"))?;
    let suite = suite.or(spec.suite).ok_or_else(|| ConfigError::new("verify.suite", "no suite selected"))?;
    let mut out = Outputs::default();
    let (outcome, mut lines) = suites::run(suite, cfg, spec, &mut out)?;
    let expected = match spec.expect {
        Expect::Pass => Outcome::Pass,
        Expect::Fail => Outcome::Fail,
    };
    let status = if outcome == expected { ExitStatus::Ok } else { ExitStatus::VerifyFailed };
    let mut verdict = Table::new(&["suite", "outcome", "expected", "status"]);
    verdict.push(vec![
        suite.name().into(),
        outcome.name().into(),
        expected.name().into(),
        status.code().to_string(),
    ]);
    out.table("verdict.csv", &verdict);
    lines.push(format!("{}: {} (expected {})", suite.name(), outcome.name(), expected.name()));
    Ok((status, lines, out))
}
