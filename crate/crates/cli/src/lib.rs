//! Command-line front end for the `selfchain` library.
//!
//! Every command resolves a [`RunConfig`] from `--config` and flags, runs on
//! a rayon pool of `--workers` threads and writes a single document. Monte
//! Carlo work is block-partitioned with one random stream per block, so the
//! output is byte-identical for any worker count.

pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub use config::{Command, CommonArgs, Format, RunConfig};
pub use error::{CliError, ErrorKind};

#[derive(Debug, Parser)]
#[command(
    name = "selfchain",
    version,
    about = "Self-chaining copula experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Draw copula samples, as uniforms or as arrival times.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Emit arrival times `−ln(U)/λ` instead of uniforms.
        #[arg(long)]
        arrival_times: bool,
    },
    /// Compare one-shot and multi-step survival, analytic and Monte Carlo.
    ChainCompare {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check the copula axioms and the self-chaining property.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate the Pickands dependence function.
    Pickands {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of equally spaced points on [0, 1].
        #[arg(long)]
        grid_size: Option<usize>,
    },
    /// Analytic and empirical Kendall's tau.
    Tau {
        #[command(flatten)]
        common: CommonArgs,
    },
}

impl Commands {
    fn parts(&self) -> (Command, &CommonArgs, config::ExtraArgs) {
        use config::ExtraArgs;
        match self {
            Commands::Simulate {
                common,
                arrival_times,
            } => (
                Command::Simulate,
                common,
                ExtraArgs {
                    arrival_times: *arrival_times,
                    ..ExtraArgs::default()
                },
            ),
            Commands::ChainCompare { common } => {
                (Command::ChainCompare, common, ExtraArgs::default())
            }
            Commands::Verify { common } => (Command::Verify, common, ExtraArgs::default()),
            Commands::Pickands { common, grid_size } => (
                Command::Pickands,
                common,
                ExtraArgs {
                    grid_size: *grid_size,
                    ..ExtraArgs::default()
                },
            ),
            Commands::Tau { common } => (Command::Tau, common, ExtraArgs::default()),
        }
    }
}

/// Maps a clap argument name to the config field it sets.
fn field_for_flag(flag: &str) -> String {
    let name = flag
        .trim_start_matches('-')
        .split([' ', '=', '<'])
        .next()
        .unwrap_or_default();
    match name {
        "periods" => "N".into(),
        "dt" => "T".into(),
        "out" => "output_path".into(),
        other => other.replace('-', "_"),
    }
}

/// Converts a clap failure into the JSON error contract.
pub fn clap_error(err: &clap::Error) -> CliError {
    use clap::error::{ContextKind, ContextValue};
    let field = match err.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => field_for_flag(s),
        _ => "command".into(),
    };
    let message = err
        .render()
        .to_string()
        .lines()
        .next()
        .unwrap_or("invalid arguments")
        .trim_start_matches("error: ")
        .to_string();
    CliError::config(field, message)
}

/// Resolves the configuration and runs it on a pool of the requested size.
pub fn run(cli: &Cli) -> Result<(RunConfig, String), CliError> {
    let (command, common, extra) = cli.command.parts();
    let file = match &common.config {
        Some(path) => config::read_config_file(path)?,
        None => config::PartialConfig::default(),
    };
    let config = RunConfig::resolve(command, file, common, &extra)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = common.workers {
        if w == 0 {
            return Err(CliError::config(
                "workers",
                "at least one worker is required",
            ));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::config("workers", e.to_string()))?;
    let output = pool.install(|| commands::execute(&config))?;
    Ok((config, output))
}

/// Parses `args`, runs, writes the output and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::error::ErrorKind as K;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => return report(&clap_error(&e)),
    };
    let result = run(&cli).and_then(|(config, output)| match &config.output_path {
        Some(path) => std::fs::write(path, output)
            .map_err(|e| CliError::config("output_path", format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::config("output_path", e.to_string()))
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> i32 {
    eprintln!("{}", e.to_json());
    e.exit_code()
}
