use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use hawkdove_core::classify::{
    classify_units, load_few_shot, unit_whole_document, units_from_sentences, units_from_speakers,
    write_scored_csv, Cache, ClassifierBackend, ClassifyOptions, Granularity, HttpBackend,
    MockBackend, Unit,
};
use hawkdove_core::corpus::{load_corpus, Corpus, DocumentKind};
use hawkdove_core::textparse::{
    aggregate_by_speaker, partition_transcript, segment_sentences_with, AbbreviationSet,
};

use crate::CliError;

/// Environment variable holding the API credential for `--backend http`.
pub const API_KEY_ENV: &str = "HAWKDOVE_API_KEY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Mock,
    Http,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Statement,
    Minutes,
    Transcript,
}

impl From<KindArg> for DocumentKind {
    fn from(kind: KindArg) -> DocumentKind {
        match kind {
            KindArg::Statement => DocumentKind::Statement,
            KindArg::Minutes => DocumentKind::Minutes,
            KindArg::Transcript => DocumentKind::Transcript,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    Sentence,
    Speaker,
    Document,
}

impl From<GranularityArg> for Granularity {
    fn from(granularity: GranularityArg) -> Granularity {
        match granularity {
            GranularityArg::Sentence => Granularity::Sentence,
            GranularityArg::Speaker => Granularity::Speaker,
            GranularityArg::Document => Granularity::WholeDocument,
        }
    }
}

#[derive(Args)]
pub struct ClassifyArgs {
    /// Corpus root directory
    #[arg(long)]
    root: PathBuf,
    /// Document kind to classify
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Unit granularity; supported pairs are statement/sentence,
    /// statement/document, minutes/document, transcript/speaker
    #[arg(long, value_enum)]
    granularity: GranularityArg,
    /// Classifier backend
    #[arg(long, value_enum, default_value = "mock")]
    backend: BackendArg,
    /// Chat-completion endpoint URL (required for --backend http)
    #[arg(long)]
    api_base: Option<String>,
    /// Model id sent to the HTTP backend
    #[arg(long)]
    model: Option<String>,
    /// Response cache path (default OUT/cache.jsonl)
    #[arg(long)]
    cache: Option<PathBuf>,
    /// JSON Lines file of few-shot examples {"text", "label"}
    #[arg(long)]
    few_shot: Option<PathBuf>,
    /// Maximum concurrent backend calls
    #[arg(long, default_value_t = 4)]
    parallelism: usize,
    /// Retries per unit after the first attempt
    #[arg(long, default_value_t = 2)]
    retries: u32,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the sentence-segmentation abbreviation list (one per line)
    #[arg(long)]
    abbreviations: Option<PathBuf>,
    /// Also write all parsed speaker turns to OUT/turns.jsonl
    #[arg(long, default_value_t = false)]
    dump_turns: bool,
}

const SUPPORTED: [(DocumentKind, Granularity); 4] = [
    (DocumentKind::Statement, Granularity::Sentence),
    (DocumentKind::Statement, Granularity::WholeDocument),
    (DocumentKind::Minutes, Granularity::WholeDocument),
    (DocumentKind::Transcript, Granularity::Speaker),
];

pub fn run(args: &ClassifyArgs) -> Result<(), CliError> {
    let kind = DocumentKind::from(args.kind);
    let granularity = Granularity::from(args.granularity);
    if !SUPPORTED.contains(&(kind, granularity)) {
        return Err(CliError::Usage(format!(
            "unsupported combination --kind {kind} --granularity {granularity}; supported: \
             statement/sentence, statement/document, minutes/document, transcript/speaker"
        )));
    }
    if args.parallelism == 0 {
        return Err(CliError::Usage("--parallelism must be at least 1".into()));
    }

    let backend: Box<dyn ClassifierBackend> = match args.backend {
        BackendArg::Mock => Box::new(MockBackend::new()),
        BackendArg::Http => {
            let api_base = args
                .api_base
                .as_deref()
                .ok_or_else(|| CliError::Usage("--backend http requires --api-base".into()))?;
            let model = args
                .model
                .as_deref()
                .ok_or_else(|| CliError::Usage("--backend http requires --model".into()))?;
            let api_key = std::env::var(API_KEY_ENV).map_err(|_| {
                CliError::Usage(format!(
                    "--backend http requires the {API_KEY_ENV} environment variable"
                ))
            })?;
            Box::new(HttpBackend::new(api_base, model, Some(api_key)))
        }
    };

    let corpus = load_corpus(&args.root).map_err(CliError::usage)?;
    let abbreviations = match &args.abbreviations {
        Some(path) => AbbreviationSet::from_file(path).map_err(CliError::usage)?,
        None => AbbreviationSet::default_set(),
    };

    fs::create_dir_all(&args.out).map_err(CliError::internal)?;
    let units = build_units(&corpus, kind, granularity, &abbreviations, args)?;
    if units.is_empty() {
        return Err(CliError::Usage(format!(
            "corpus at {} has no {kind} documents to classify",
            args.root.display()
        )));
    }

    let few_shot = match &args.few_shot {
        Some(path) => load_few_shot(path).map_err(CliError::usage)?,
        None => Vec::new(),
    };

    let cache_path = args
        .cache
        .clone()
        .unwrap_or_else(|| args.out.join("cache.jsonl"));
    let cache = Cache::open(&cache_path).map_err(CliError::internal)?;

    let opts = ClassifyOptions {
        retries: args.retries,
        parallelism: args.parallelism,
        ..ClassifyOptions::default()
    };
    let outcome = classify_units(&units, backend.as_ref(), &cache, &few_shot, &opts)
        .map_err(CliError::internal)?;

    let csv_path = args.out.join(format!("scored_{kind}_{granularity}.csv"));
    let file = fs::File::create(&csv_path).map_err(CliError::internal)?;
    write_scored_csv(file, &outcome.scored).map_err(CliError::internal)?;

    if !outcome.errors.is_empty() {
        let manifest: Vec<serde_json::Value> = outcome
            .errors
            .iter()
            .map(|e| {
                serde_json::json!({
                    "date": e.unit.meeting.to_string(),
                    "kind": e.unit.kind.to_string(),
                    "granularity": e.unit.granularity.to_string(),
                    "key": e.unit.key,
                    "error": e.error.to_string(),
                })
            })
            .collect();
        let errors_path = args
            .out
            .join(format!("scored_{kind}_{granularity}.errors.json"));
        let mut file = fs::File::create(&errors_path).map_err(CliError::internal)?;
        writeln!(
            file,
            "{}",
            serde_json::to_string_pretty(&manifest).map_err(CliError::internal)?
        )
        .map_err(CliError::internal)?;
        eprintln!(
            "{} unit(s) failed classification; manifest at {}",
            outcome.errors.len(),
            errors_path.display()
        );
    }

    let hit_rate = if units.is_empty() {
        0.0
    } else {
        outcome.cache_hits as f64 / units.len() as f64
    };
    println!(
        "classified {} units ({} cache hits ({:.0}%), {} backend calls, {} errors)",
        outcome.scored.len(),
        outcome.cache_hits,
        hit_rate * 100.0,
        outcome.backend_calls,
        outcome.errors.len()
    );
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn build_units(
    corpus: &Corpus,
    kind: DocumentKind,
    granularity: Granularity,
    abbreviations: &AbbreviationSet,
    args: &ClassifyArgs,
) -> Result<Vec<Unit>, CliError> {
    let mut units = Vec::new();
    let mut turns_out: Option<fs::File> = if args.dump_turns {
        let path = args.out.join("turns.jsonl");
        Some(fs::File::create(path).map_err(CliError::internal)?)
    } else {
        None
    };

    for doc in corpus.documents().iter().filter(|d| d.kind == kind) {
        match granularity {
            Granularity::Sentence => {
                let sentences = segment_sentences_with(doc, abbreviations);
                units.extend(units_from_sentences(kind, &sentences));
            }
            Granularity::WholeDocument => units.push(unit_whole_document(doc)),
            Granularity::Speaker => {
                let partition = partition_transcript(doc).map_err(CliError::usage)?;
                if let Some(out) = turns_out.as_mut() {
                    for turn in &partition.turns {
                        let line = serde_json::json!({
                            "date": doc.meeting.to_string(),
                            "speaker": turn.speaker,
                            "index": turn.index,
                            "text": turn.text,
                        });
                        writeln!(out, "{line}").map_err(CliError::internal)?;
                    }
                }
                let aggregates = aggregate_by_speaker(&partition.turns);
                units.extend(units_from_speakers(doc.meeting, kind, &aggregates));
            }
        }
    }
    Ok(units)
}
