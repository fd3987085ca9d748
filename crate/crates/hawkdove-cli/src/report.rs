use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use hawkdove_core::classify::{read_scored_csv, Granularity, Label, ScoredUnit, Unit};
use hawkdove_core::corpus::{DocumentKind, MeetingId};
use hawkdove_core::dissent::{detect_dissent, dissent_report, write_dissent_csv, DissentRecord};
use hawkdove_core::eval::{f1_macro, load_gold_csv, write_confusion_csv};
use hawkdove_core::score::{meeting_series, write_scores_csv};

use crate::CliError;

#[derive(Args)]
pub struct ReportArgs {
    /// Directory holding the scored_*.csv files; reports land here too
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Gold label CSV (date,label) enabling the evaluation report
    #[arg(long)]
    gold: Option<PathBuf>,
}

pub fn run(args: &ReportArgs) -> Result<(), CliError> {
    let (scored, failed) = read_scored_inputs(&args.out)?;
    if scored.is_empty() {
        return Err(CliError::Usage(format!(
            "no scored-unit CSVs found in {}; run `hawkdove classify` first",
            args.out.display()
        )));
    }

    // Score series.
    let series = meeting_series(&scored, &failed);
    let scores_path = args.out.join("scores.csv");
    let file = fs::File::create(&scores_path).map_err(CliError::internal)?;
    write_scores_csv(file, &series).map_err(CliError::internal)?;

    // Dissent: statement dissent from sentence units, transcript dissent
    // from speaker units.
    let mut records: Vec<DissentRecord> = Vec::new();
    records.extend(dissent_records(
        &scored,
        DocumentKind::Statement,
        Granularity::Sentence,
    )?);
    records.extend(dissent_records(
        &scored,
        DocumentKind::Transcript,
        Granularity::Speaker,
    )?);
    let report = dissent_report(&records);

    let dissent_json_path = args.out.join("dissent.json");
    fs::write(
        &dissent_json_path,
        serde_json::to_string_pretty(&report).map_err(CliError::internal)? + "\n",
    )
    .map_err(CliError::internal)?;
    let dissent_csv_path = args.out.join("dissent_records.csv");
    let file = fs::File::create(&dissent_csv_path).map_err(CliError::internal)?;
    write_dissent_csv(file, &report.records).map_err(CliError::internal)?;

    // Plot data: tidy time series and per-meeting flags.
    write_plot_scores(&args.out, &series)?;
    write_plot_dissent(&args.out, &report.records)?;

    // Evaluation against gold labels, when provided.
    if let Some(gold_path) = &args.gold {
        run_eval(args, gold_path, &scored)?;
    }

    println!("wrote {}", scores_path.display());
    println!("wrote {}", dissent_json_path.display());
    match report.statement_rate {
        Some(rate) => println!(
            "statement dissent rate: {:.2} ({} meetings)",
            rate, report.n_statements
        ),
        None => println!("statement dissent rate: n/a (no statement units)"),
    }
    match report.transcript_rate {
        Some(rate) => println!(
            "transcript dissent rate: {:.2} ({} meetings)",
            rate, report.n_transcripts
        ),
        None => println!("transcript dissent rate: n/a (no transcript units)"),
    }
    if let Some(p) = report.p_t_given_s1 {
        println!(
            "P(T=1|S=1) = {:.2} ({}/{})",
            p, report.pair_counts.n_t1_s1, report.pair_counts.n_s1
        );
    }
    if let Some(p) = report.p_t_given_s0 {
        println!(
            "P(T=1|S=0) = {:.2} ({}/{})",
            p, report.pair_counts.n_t1_s0, report.pair_counts.n_s0
        );
    }
    Ok(())
}

/// Reads every scored_*.csv in the output directory, plus any *.errors.json
/// manifests for excluded-unit accounting.
fn read_scored_inputs(out: &Path) -> Result<(Vec<ScoredUnit>, Vec<Unit>), CliError> {
    let mut scored = Vec::new();
    let mut failed = Vec::new();
    let entries = fs::read_dir(out).map_err(|err| {
        CliError::Usage(format!(
            "cannot read output directory {}: {err}; run `hawkdove classify` first",
            out.display()
        ))
    })?;
    let mut paths: Vec<PathBuf> = entries.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    paths.sort();

    for path in paths {
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        if name.starts_with("scored_") && name.ends_with(".csv") {
            let file = fs::File::open(&path).map_err(CliError::internal)?;
            scored.extend(
                read_scored_csv(file)
                    .map_err(|err| CliError::Usage(format!("{}: {err}", path.display())))?,
            );
        } else if name.starts_with("scored_") && name.ends_with(".errors.json") {
            let text = fs::read_to_string(&path).map_err(CliError::internal)?;
            let entries: Vec<serde_json::Value> =
                serde_json::from_str(&text).map_err(CliError::internal)?;
            for entry in entries {
                failed.push(Unit {
                    meeting: MeetingId::parse(entry["date"].as_str().unwrap_or(""))
                        .map_err(CliError::internal)?,
                    kind: DocumentKind::parse(entry["kind"].as_str().unwrap_or(""))
                        .map_err(CliError::internal)?,
                    granularity: Granularity::parse(entry["granularity"].as_str().unwrap_or(""))
                        .unwrap_or(Granularity::Sentence),
                    key: entry["key"].as_str().unwrap_or("").to_string(),
                    text: String::new(),
                });
            }
        }
    }
    Ok((scored, failed))
}

fn dissent_records(
    scored: &[ScoredUnit],
    kind: DocumentKind,
    granularity: Granularity,
) -> Result<Vec<DissentRecord>, CliError> {
    let mut by_meeting: BTreeMap<MeetingId, Vec<ScoredUnit>> = BTreeMap::new();
    for unit in scored {
        if unit.unit.kind == kind && unit.unit.granularity == granularity {
            by_meeting
                .entry(unit.unit.meeting)
                .or_default()
                .push(unit.clone());
        }
    }
    by_meeting
        .into_values()
        .map(|units| detect_dissent(&units).map_err(CliError::internal))
        .collect()
}

fn write_plot_scores(
    out: &Path,
    series: &[hawkdove_core::score::MeetingScores],
) -> Result<(), CliError> {
    let path = out.join("plot_scores.csv");
    let mut lines = vec!["date,kind,granularity,mean_score,logit_score".to_string()];
    for row in series {
        lines.push(format!(
            "{},{},{},{},{:.6}",
            row.meeting,
            row.kind,
            row.granularity,
            row.mean_score
                .map(|m| format!("{m:.6}"))
                .unwrap_or_default(),
            row.logit_score,
        ));
    }
    fs::write(path, lines.join("\n") + "\n").map_err(CliError::internal)
}

fn write_plot_dissent(out: &Path, records: &[DissentRecord]) -> Result<(), CliError> {
    let path = out.join("plot_dissent.csv");
    let mut lines = vec!["date,kind,dissent".to_string()];
    for record in records {
        lines.push(format!(
            "{},{},{}",
            record.meeting, record.kind, record.dissent as u8
        ));
    }
    fs::write(path, lines.join("\n") + "\n").map_err(CliError::internal)
}

fn run_eval(args: &ReportArgs, gold_path: &Path, scored: &[ScoredUnit]) -> Result<(), CliError> {
    let file = fs::File::open(gold_path).map_err(|err| {
        CliError::Usage(format!(
            "cannot read gold labels {}: {err}",
            gold_path.display()
        ))
    })?;
    let gold = load_gold_csv(file).map_err(CliError::usage)?;

    let predictions: Vec<(MeetingId, Label)> = scored
        .iter()
        .filter(|s| {
            s.unit.kind == DocumentKind::Statement
                && s.unit.granularity == Granularity::WholeDocument
        })
        .map(|s| (s.unit.meeting, s.label))
        .collect();
    if predictions.is_empty() {
        return Err(CliError::Usage(
            "gold labels were provided but there are no whole-statement predictions; \
             run `hawkdove classify --kind statement --granularity document` first"
                .into(),
        ));
    }

    let report = f1_macro(&gold, &predictions).map_err(CliError::usage)?;
    let eval_path = args.out.join("eval.json");
    fs::write(
        &eval_path,
        serde_json::to_string_pretty(&report).map_err(CliError::internal)? + "\n",
    )
    .map_err(CliError::internal)?;
    let confusion_path = args.out.join("confusion.csv");
    let file = fs::File::create(&confusion_path).map_err(CliError::internal)?;
    write_confusion_csv(file, &report).map_err(CliError::internal)?;
    println!("wrote {}", eval_path.display());
    println!(
        "macro F1 over {} meetings: {:.4} (adjacent {:.2}, flips {:.2})",
        report.n, report.f1_macro, report.adjacent_rate, report.flip_rate
    );
    Ok(())
}
