use std::fs;
use std::path::PathBuf;

use clap::Args;
use hawkdove_core::corpus::{
    fetch_remote, load_corpus, validate_alignment, DocumentKind, MeetingId, Severity,
};

use crate::CliError;

#[derive(Args)]
pub struct IngestArgs {
    /// Corpus root: one YYYYMMDD directory per meeting
    #[arg(long)]
    root: PathBuf,
    /// Output directory for manifest.json
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Fetch DATE:KIND into the corpus before loading (repeatable)
    #[arg(long = "fetch", value_name = "DATE:KIND")]
    fetch: Vec<String>,
    /// Base URL for --fetch (documents live at BASE/YYYYMMDD/KIND.txt)
    #[arg(long)]
    base_url: Option<String>,
}

pub fn run(args: &IngestArgs) -> Result<(), CliError> {
    if !args.fetch.is_empty() {
        let base_url = args
            .base_url
            .as_deref()
            .ok_or_else(|| CliError::Usage("--fetch requires --base-url".into()))?;
        for spec in &args.fetch {
            let (date, kind) = parse_fetch_spec(spec)?;
            let doc = fetch_remote(&args.root, date, kind, base_url).map_err(CliError::usage)?;
            println!(
                "fetched {} {} ({} bytes)",
                doc.meeting,
                doc.kind,
                doc.text.len()
            );
        }
    }

    let corpus = load_corpus(&args.root).map_err(CliError::usage)?;
    let report = validate_alignment(&corpus);

    match corpus.span() {
        Some((first, last)) => println!(
            "loaded {} documents across {} meetings, {first} to {last}",
            corpus.len(),
            corpus.meetings().len()
        ),
        None => println!("loaded 0 documents"),
    }
    for flag in &report.flags {
        let level = match flag.severity {
            Severity::Warn => "WARN",
            Severity::Info => "INFO",
        };
        println!("{level} {}: missing {}", flag.meeting, flag.missing);
    }

    fs::create_dir_all(&args.out).map_err(CliError::internal)?;
    let manifest_path = args.out.join("manifest.json");
    let manifest = serde_json::to_string_pretty(&corpus.manifest()).map_err(CliError::internal)?;
    fs::write(&manifest_path, manifest + "\n").map_err(CliError::internal)?;
    println!("wrote {}", manifest_path.display());
    Ok(())
}

fn parse_fetch_spec(spec: &str) -> Result<(MeetingId, DocumentKind), CliError> {
    let (date, kind) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("--fetch expects DATE:KIND, got `{spec}`")))?;
    Ok((
        MeetingId::parse(date).map_err(CliError::usage)?,
        DocumentKind::parse(kind).map_err(CliError::usage)?,
    ))
}
