//! Command-line front end for perspectiva: certifiers, scenario audits and
//! the Hardy presets, reporting as text or JSON.

mod commands;
mod error;
pub mod files;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use perspectiva::nonlocality::DEFAULT_MAX_ASSIGNMENTS;
use perspectiva::theory::TheoryKind;

pub use error::CliError;
pub use report::Report;

/// Environment variable consulted when `--tol` is not given.
pub const TOL_ENV: &str = "PERSPECTIVA_TOL";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theory {
    Isometric,
    Collapse,
    Classical,
}

impl From<Theory> for TheoryKind {
    fn from(t: Theory) -> Self {
        match t {
            Theory::Isometric => TheoryKind::QuantumIsometric,
            Theory::Collapse => TheoryKind::QuantumCollapse,
            Theory::Classical => TheoryKind::ClassicalCopy,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "perspectiva", version, about = "Bell certifiers and Wigner-friend scenario audits")]
pub struct Cli {
    /// Numerical tolerance [default: $PERSPECTIVA_TOL or 1e-9]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Refuse marginal problems with more global assignments than this
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ASSIGNMENTS)]
    pub max_assignments: usize,
    /// Add wall-clock time to the report
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a distribution has a local hidden-variable model
    CertifyLhv { file: PathBuf },
    /// Look for a possibilistic (Hardy-type) obstruction
    CertifyPossibilistic { file: PathBuf },
    /// CHSH value and no-signalling check of a two-party binary distribution
    Chsh { file: PathBuf },
    /// Distribution a scenario file predicts
    Predict { file: PathBuf },
    /// Build the layered Wigner-friend circuit of a scenario and audit it
    ConstructAudit { file: PathBuf },
    /// Run the Hardy scenario under one theory
    Hardy {
        #[arg(long, value_enum, default_value_t = Theory::Isometric)]
        theory: Theory,
    },
    /// Whether an input wire of a channel can affect an output wire
    NoInfluence {
        file: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

/// Resolved global options.
#[derive(Clone, Debug)]
pub struct Options {
    pub tol: f64,
    pub max_assignments: usize,
    pub timing: bool,
}

fn resolve_tol(flag: Option<f64>, env: Option<&str>) -> Result<f64, CliError> {
    let tol = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{TOL_ENV}=`{s}` is not a number")))?,
        (None, None) => perspectiva::DEFAULT_TOL,
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

/// Runs the command line `args` (program name first) with the tolerance
/// override read from the process environment.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var(TOL_ENV).ok();
    run_with_env(args, env.as_deref(), stdout, stderr)
}

/// Like [`run`], with the environment's tolerance passed in.
pub fn run_with_env<I, S>(args: I, env_tol: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let text = e.render().to_string();
            if help {
                let _ = write!(stdout, "{text}");
                return 0;
            }
            let _ = write!(stderr, "{text}");
            return 1;
        }
    };
    match execute(&cli, env_tol) {
        Ok(text) => match &cli.out {
            Some(path) => match std::fs::write(path, text) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    1
                }
            },
            None => {
                let _ = write!(stdout, "{text}");
                0
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, env_tol: Option<&str>) -> Result<String, CliError> {
    let opts = Options {
        tol: resolve_tol(cli.tol, env_tol)?,
        max_assignments: cli.max_assignments,
        timing: cli.timing,
    };
    let report = commands::dispatch(&cli.command, &opts)?;
    Ok(match cli.format {
        Format::Text => report::to_text(&report),
        Format::Json => report::to_json(&report),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_precedence() {
        assert_eq!(resolve_tol(Some(1e-6), Some("1e-3")).unwrap(), 1e-6);
        assert_eq!(resolve_tol(None, Some("1e-3")).unwrap(), 1e-3);
        assert_eq!(resolve_tol(None, None).unwrap(), 1e-9);
        assert!(resolve_tol(None, Some("tiny")).is_err());
        assert!(resolve_tol(Some(-1.0), None).is_err());
    }
}
