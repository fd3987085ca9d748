//! `hawkdove`: a staged pipeline over FOMC meeting documents.
//!
//! `ingest` loads and validates the corpus, `classify` labels text units
//! through a backend with caching, `report` aggregates labelled units into
//! score series, dissent measures, and evaluation output, and `negativity`
//! runs the per-topic lexicon analysis. Stages hand off through files in the
//! output directory, so expensive classification runs can be resumed and
//! audited.

mod classify_cmd;
mod ingest;
mod negativity_cmd;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "hawkdove",
    version,
    about = "Hawk/dove sentiment and dissent measures over FOMC meeting documents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the corpus, validate alignment, and write a manifest
    Ingest(ingest::IngestArgs),
    /// Classify text units of one (kind, granularity) into hawk/dove labels
    Classify(classify_cmd::ClassifyArgs),
    /// Aggregate scored units into score series, dissent, and eval reports
    Report(report::ReportArgs),
    /// Per-topic negativity analysis of one transcript
    Negativity(negativity_cmd::NegativityArgs),
}

/// Exit codes: 0 success, 1 internal error, 2 user/config error.
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn usage(err: impl std::fmt::Display) -> CliError {
        CliError::Usage(err.to_string())
    }

    fn internal(err: impl std::fmt::Display) -> CliError {
        CliError::Internal(err.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(args) => ingest::run(&args),
        Command::Classify(args) => classify_cmd::run(&args),
        Command::Report(args) => report::run(&args),
        Command::Negativity(args) => negativity_cmd::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
