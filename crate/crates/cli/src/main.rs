use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qhgeo_cli::{execute, Command, ConfigError, ExitStatus, Failure, RunConfig, Suite};

/// Quasihyperbolic geometry computations driven by a TOML scenario file.
///
/// Exit codes: 0 success, 1 verification outcome differs from the
/// expectation, 2 configuration error, 3 numerical non-convergence.
#[derive(Debug, Parser)]
#[command(name = "qhgeo", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Scenario file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Estimate moduli of convexity or smoothness of the configured norm.
    Moduli(Common),
    /// Compute a geodesic and distance bounds between two points.
    Geodesic(Common),
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite to run; defaults to `verify.suite` from the scenario.
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Averaging,
    Convexity,
    Starlike,
    Smoothness,
    Endpoint,
    Midpoint,
    Series,
    Dini,
    Gauge,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Averaging => Suite::Averaging,
            SuiteArg::Convexity => Suite::Convexity,
            SuiteArg::Starlike => Suite::Starlike,
            SuiteArg::Smoothness => Suite::Smoothness,
            SuiteArg::Endpoint => Suite::Endpoint,
            SuiteArg::Midpoint => Suite::Midpoint,
            SuiteArg::Series => Suite::Series,
            SuiteArg::Dini => Suite::Dini,
            SuiteArg::Gauge => Suite::Gauge,
        }
    }
}

fn load(common: &Common) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", common.config.display())))?;
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, command, suite) = match &cli.command {
        Cmd::Moduli(c) => (c, Command::Moduli, None),
        Cmd::Geodesic(c) => (c, Command::Geodesic, None),
        Cmd::Verify { common, suite } => (common, Command::Verify, suite.map(Suite::from)),
    };
    let report = load(common).and_then(|cfg| execute(&cfg, command, suite));
    match report {
        Err(f) => {
            eprintln!("qhgeo: {f}");
            ExitCode::from(f.status().code())
        }
        Ok(report) => {
            // a closed stdout (e.g. piped into `head`) must not abort the run
            let mut stdout = std::io::stdout().lock();
            for line in &report.summary {
                let _ = writeln!(stdout, "{line}");
            }
            match report.outputs.write_all(&report.dir) {
                Ok(paths) => {
                    for p in paths {
                        let _ = writeln!(stdout, "wrote {}", p.display());
                    }
                    ExitCode::from(report.status.code())
                }
                Err(e) => {
                    eprintln!("qhgeo: cannot write outputs to {}: {e}", report.dir.display());
                    ExitCode::from(ExitStatus::Config.code())
                }
            }
        }
    }
}
