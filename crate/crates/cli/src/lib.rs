//! Command-line driver for the `gsruin` library: formula evaluation,
//! simulation, formula-versus-simulation comparison and parameter sweeps.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use commands::Axis;
pub use config::RunConfig;
pub use output::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] gsruin::Error),

    #[error("{failed} of {total} comparisons exceed the z threshold")]
    Comparison { failed: usize, total: usize },
}

impl CliError {
    /// 2 validation, 3 comparison failure, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 4,
            CliError::Comparison { .. } => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "validation",
            3 => "comparison",
            _ => "numerical",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gsruin", version, about = "Gerber–Shiu functionals at excursion-marked bankruptcy")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// TOML run configuration; defaults are used for missing sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Emit line-delimited JSON instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,

    /// Override `sim.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Override `sim.n_paths`.
    #[arg(long, global = true)]
    pub paths: Option<u64>,

    /// Override `compare.z_max`.
    #[arg(long, global = true)]
    pub z_max: Option<f64>,

    /// Override `sim.threads` (0 = all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print the effective configuration with all defaults and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the closed-form value at every query point.
    Compute,
    /// Monte Carlo estimate at every query point.
    Simulate,
    /// Formula against Monte Carlo, with z-scores.
    Compare,
    /// Formula values along one axis, in long format.
    Sweep {
        #[arg(long, value_enum)]
        axis: Axis,
    },
}

impl Cli {
    /// The configuration file with command-line overrides applied.
    pub fn effective_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.sim.seed = seed;
        }
        if let Some(n) = self.paths {
            cfg.sim.n_paths = n;
        }
        if let Some(z) = self.z_max {
            cfg.compare.z_max = z;
        }
        if let Some(t) = self.threads {
            cfg.sim.threads = t;
        }
        Ok(cfg)
    }

    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            Format::Csv
        }
    }

    /// Run the selected command and return the rendered output.
    pub fn execute(&self) -> Result<Rendered, CliError> {
        let cfg = self.effective_config()?;
        if self.print_config {
            return Ok(Rendered { text: cfg.to_toml(), failed: 0, total: 0 });
        }
        let fmt = self.format();
        let plain = |text: String| Rendered { text, failed: 0, total: 0 };
        match &self.command {
            None => Err(CliError::Config("no command given (compute | simulate | compare | sweep)".into())),
            Some(Command::Compute) => Ok(plain(output::render(&commands::compute(&cfg)?, fmt)?)),
            Some(Command::Simulate) => Ok(plain(output::render(&commands::simulate(&cfg)?, fmt)?)),
            Some(Command::Sweep { axis }) => Ok(plain(output::render(&commands::sweep(&cfg, *axis)?, fmt)?)),
            Some(Command::Compare) => {
                let (rows, _) = commands::compare(&cfg)?;
                let failed = rows.iter().filter(|r| !r.pass).count();
                Ok(Rendered { text: output::render(&rows, fmt)?, failed, total: rows.len() })
            }
        }
    }
}

/// Command output plus the comparison tally (zero for other commands).
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    pub failed: usize,
    pub total: usize,
}

/// Parse `args`, run, write the output and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = cli.execute().and_then(|out| {
        // a failing comparison still writes its table
        write_output(&cli, &out.text)?;
        if out.failed > 0 {
            return Err(CliError::Comparison { failed: out.failed, total: out.total });
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            if cli.json {
                let msg = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
                eprintln!("{msg}");
            } else {
                eprintln!("error ({}): {e}", e.kind());
            }
            e.exit_code()
        }
    }
}

fn write_output(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}
