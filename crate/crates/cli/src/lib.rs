//! Library side of the `lwe-xform` command: argument parsing, commands and
//! the verification suites.

pub mod commands;
pub mod config;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Failure classes, each with its own exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// A verification row failed its bound.
    Acceptance(String),
    /// Bad configuration, unreadable input or unknown suite.
    Config(String),
    /// A probabilistic step gave up; this is a counted outcome, not a bug.
    Abort(String),
    /// Any other failure inside a computation.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Acceptance(_) => 1,
            CliError::Config(_) | CliError::Runtime(_) => 2,
            CliError::Abort(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Acceptance(m) => write!(f, "acceptance failure: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Abort(m) => write!(f, "abort: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "lwe-xform",
    version,
    about = "Generate LWE batches, run reductions and verification suites"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Root seed; overrides `seed` in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file, written atomically. Defaults to standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Keep secrets and noise in output batches.
    #[arg(long, global = true)]
    pub transparent: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a batch of LWE (or uniform) samples.
    Sample {
        /// `key=value` config overrides.
        overrides: Vec<String>,
    },
    /// Apply exactly one reduction stage.
    Reduce { overrides: Vec<String> },
    /// Apply the configured chain of stages.
    Pipeline { overrides: Vec<String> },
    /// Run a verification suite: gauss, reductions, hybrids or endtoend.
    Verify { suite: String, overrides: Vec<String> },
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_main<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    match commands::run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}
