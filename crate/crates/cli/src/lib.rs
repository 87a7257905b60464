//! Command-line driver for the vpdk pipeline and its single-step commands.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use vpdk::topology::LabelingKind;

use config::RunConfig;
use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "vpdk", version, about = "Virtual persistence diagrams, kernels and bounds")]
pub struct Cli {
    /// Run configuration (JSON); defaults apply to missing fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides every seed in the configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Output directory for `pipeline`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Restricts `pipeline` to the named labelings (repeatable).
    #[arg(long, global = true, value_parser = parse_kind)]
    pub variant: Vec<LabelingKind>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DendrogramFormat {
    Newick,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Runs every configured labeling end to end.
    Pipeline,
    /// Prints ρ between two diagram files.
    Distance { a: PathBuf, b: PathBuf },
    /// Tests a point sample for uniform discreteness.
    Classify {
        points: PathBuf,
        #[arg(long)]
        epsilon: f64,
    },
    /// Gram matrix and Lipschitz bound for diagram files.
    Kernel {
        #[arg(required = true)]
        diagrams: Vec<PathBuf>,
    },
    /// Random-feature kernel estimates against the closed form.
    Rff {
        #[arg(required = true)]
        diagrams: Vec<PathBuf>,
    },
    /// Mass certificate for one diagram.
    Certificate { diagram: PathBuf },
    /// Single-linkage dendrogram of a diagram's points and the basepoint.
    Dendrogram {
        diagram: PathBuf,
        #[arg(long, value_enum, default_value = "newick")]
        format: DendrogramFormat,
    },
}

fn parse_kind(s: &str) -> std::result::Result<LabelingKind, String> {
    s.parse().map_err(|e: vpdk::Error| e.to_string())
}

fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config = config.with_seed(seed);
    }
    if !cli.variant.is_empty() {
        config.variants = cli.variant.clone();
    }
    config.validate()?;
    Ok(config)
}

/// Runs a parsed command; `Ok(false)` means it finished with failures.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let config = resolve_config(cli)?;
    let json = cli.json;
    match &cli.command {
        Command::Pipeline => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("vpdk-run"));
            return commands::pipeline(&config, &dir, json, out);
        }
        Command::Distance { a, b } => commands::distance(a, b, json, out)?,
        Command::Classify { points, epsilon } => commands::classify(points, *epsilon, json, out)?,
        Command::Kernel { diagrams } => commands::kernel(&config, diagrams, json, out)?,
        Command::Rff { diagrams } => commands::rff(&config, diagrams, json, out)?,
        Command::Certificate { diagram } => commands::certificate(&config, diagram, json, out)?,
        Command::Dendrogram { diagram, format } => {
            commands::dendrogram(diagram, *format == DendrogramFormat::Newick, out)?
        }
    }
    Ok(true)
}

/// Full entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            report_error(&cli, &e, &mut lock);
            e.exit_code()
        }
    }
}

fn report_error(cli: &Cli, e: &CliError, out: &mut dyn Write) {
    if cli.json {
        let body = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
        let _ = writeln!(out, "{body}");
    }
    eprintln!("vpdk: {e}");
}
