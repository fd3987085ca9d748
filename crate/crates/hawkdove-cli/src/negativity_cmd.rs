use std::fs;
use std::path::PathBuf;

use clap::Args;
use hawkdove_core::corpus::{load_corpus, DocumentKind, MeetingId};
use hawkdove_core::negativity::{
    load_topic_spans, negative_fraction_by_topic, overall_negativity, write_negativity_csv,
    Lexicon, NegativityResult,
};

use crate::CliError;

#[derive(Args)]
pub struct NegativityArgs {
    /// Corpus root directory
    #[arg(long)]
    root: PathBuf,
    /// Meeting date (YYYYMMDD) of the transcript to analyze
    #[arg(long)]
    date: String,
    /// Topic span config: JSON list of {topic, start_line, end_line}
    #[arg(long)]
    topics: PathBuf,
    /// Lexicon file (token<TAB>valence); defaults to the small built-in one
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Negativity threshold for counting a sentence as negative
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    /// Run at several thresholds, e.g. 0.05,0.1,0.15
    #[arg(long, value_delimiter = ',', value_name = "T1,T2,...")]
    threshold_sweep: Option<Vec<f64>>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

pub fn run(args: &NegativityArgs) -> Result<(), CliError> {
    let meeting = MeetingId::parse(&args.date).map_err(CliError::usage)?;
    let corpus = load_corpus(&args.root).map_err(CliError::usage)?;
    let doc = corpus
        .get(meeting, DocumentKind::Transcript)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "no transcript for {meeting} under {}",
                args.root.display()
            ))
        })?;

    let spans = load_topic_spans(&args.topics).map_err(CliError::usage)?;
    let lexicon = match &args.lexicon {
        Some(path) => Lexicon::from_file(path).map_err(CliError::usage)?,
        None => Lexicon::builtin(),
    };

    let thresholds = args
        .threshold_sweep
        .clone()
        .unwrap_or_else(|| vec![args.threshold]);

    let mut rows: Vec<NegativityResult> = Vec::new();
    for threshold in &thresholds {
        rows.extend(
            negative_fraction_by_topic(doc, &spans, *threshold, &lexicon)
                .map_err(CliError::usage)?,
        );
        rows.push(overall_negativity(doc, &spans, *threshold, &lexicon).map_err(CliError::usage)?);
    }

    fs::create_dir_all(&args.out).map_err(CliError::internal)?;
    let path = args.out.join("negativity.csv");
    let file = fs::File::create(&path).map_err(CliError::internal)?;
    write_negativity_csv(file, &rows).map_err(CliError::internal)?;

    for row in &rows {
        let fraction = row
            .fraction_negative
            .map(|f| format!("{f:.3}"))
            .unwrap_or_else(|| "n/a".into());
        println!(
            "t={:<5} {:<24} sentences {:>4}  negative {:>4}  fraction {:>6}  speakers {:>3}",
            row.threshold, row.topic, row.n_sentences, row.n_negative, fraction, row.n_speakers
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}
