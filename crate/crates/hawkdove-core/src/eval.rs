//! Comparison of machine labels against gold labels: macro-F1, confusion
//! matrix, and the adjacency/flip breakdown of disagreements.

use std::io::{Read, Write};

use serde::Serialize;
use thiserror::Error;

use crate::classify::Label;
use crate::corpus::MeetingId;

/// Human-adjudicated whole-statement label for one meeting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoldLabel {
    pub meeting: MeetingId,
    pub label: Label,
}

/// Per-category precision/recall/F1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClassMetrics {
    pub label: Label,
    pub support: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    /// Meetings compared (gold ∩ predictions).
    pub n: usize,
    /// Unweighted mean of per-category F1 over categories present in gold or
    /// predictions.
    pub f1_macro: f64,
    /// Rows gold, columns predicted, both in dovish→hawkish order.
    pub confusion: [[usize; 5]; 5],
    pub per_class: Vec<ClassMetrics>,
    pub n_disagreements: usize,
    /// Fraction of disagreements exactly one category apart (0 when there
    /// are no disagreements).
    pub adjacent_rate: f64,
    /// Fraction of disagreements that cross sign (hawkish side vs dovish
    /// side).
    pub flip_rate: f64,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("duplicate gold label for {meeting}")]
    DuplicateGold { meeting: MeetingId },
    #[error("duplicate prediction for {meeting}")]
    DuplicatePrediction { meeting: MeetingId },
    #[error("no meetings in common between gold and predictions")]
    EmptyComparison,
    #[error("gold row {line}: {message}")]
    BadGoldRow { line: usize, message: String },
    #[error("failed to read gold labels: {0}")]
    Io(#[from] std::io::Error),
}

/// Loads gold labels from CSV with header `date,label`, category names
/// verbatim.
pub fn load_gold_csv<R: Read>(reader: R) -> Result<Vec<GoldLabel>, EvalError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut out: Vec<GoldLabel> = Vec::new();
    for (row_no, record) in csv_reader.records().enumerate() {
        let record = record.map_err(|err| EvalError::BadGoldRow {
            line: row_no + 2,
            message: err.to_string(),
        })?;
        let date = record.get(0).unwrap_or("");
        let meeting = MeetingId::parse(date).map_err(|err| EvalError::BadGoldRow {
            line: row_no + 2,
            message: err.to_string(),
        })?;
        let name = record.get(1).unwrap_or("");
        let label = Label::parse_name(name).ok_or_else(|| EvalError::BadGoldRow {
            line: row_no + 2,
            message: format!("unknown label `{name}`"),
        })?;
        if out.iter().any(|g| g.meeting == meeting) {
            return Err(EvalError::DuplicateGold { meeting });
        }
        out.push(GoldLabel { meeting, label });
    }
    Ok(out)
}

/// Compares predictions to gold labels over their common meetings.
///
/// Macro-F1 averages per-category F1 unweighted over the categories present
/// in gold or predictions; categories absent from both are excluded. A
/// category with zero precision+recall contributes F1 = 0. Adjacency and
/// flips use the score mapping: adjacent means the scores differ by exactly
/// 0.5, a flip means their product is negative.
pub fn f1_macro(gold: &[GoldLabel], pred: &[(MeetingId, Label)]) -> Result<EvalReport, EvalError> {
    for (i, g) in gold.iter().enumerate() {
        if gold[..i].iter().any(|other| other.meeting == g.meeting) {
            return Err(EvalError::DuplicateGold { meeting: g.meeting });
        }
    }
    for (i, (meeting, _)) in pred.iter().enumerate() {
        if pred[..i].iter().any(|(other, _)| other == meeting) {
            return Err(EvalError::DuplicatePrediction { meeting: *meeting });
        }
    }

    let mut confusion = [[0usize; 5]; 5];
    let mut n = 0usize;
    let mut n_disagreements = 0usize;
    let mut n_adjacent = 0usize;
    let mut n_flips = 0usize;
    for g in gold {
        let Some((_, predicted)) = pred.iter().find(|(meeting, _)| *meeting == g.meeting) else {
            continue;
        };
        n += 1;
        confusion[g.label.index()][predicted.index()] += 1;
        if g.label != *predicted {
            n_disagreements += 1;
            if (g.label.score() - predicted.score()).abs() == 0.5 {
                n_adjacent += 1;
            }
            if g.label.score() * predicted.score() < 0.0 {
                n_flips += 1;
            }
        }
    }
    if n == 0 {
        return Err(EvalError::EmptyComparison);
    }

    let mut per_class = Vec::new();
    let mut f1_sum = 0.0;
    let mut f1_classes = 0usize;
    for label in Label::ALL {
        let idx = label.index();
        let tp = confusion[idx][idx];
        let gold_total: usize = confusion[idx].iter().sum();
        let pred_total: usize = (0..5).map(|row| confusion[row][idx]).sum();
        if gold_total == 0 && pred_total == 0 {
            continue;
        }
        let precision = if pred_total == 0 {
            0.0
        } else {
            tp as f64 / pred_total as f64
        };
        let recall = if gold_total == 0 {
            0.0
        } else {
            tp as f64 / gold_total as f64
        };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        per_class.push(ClassMetrics {
            label,
            support: gold_total,
            precision,
            recall,
            f1,
        });
        f1_sum += f1;
        f1_classes += 1;
    }

    let rate = |count: usize| {
        if n_disagreements == 0 {
            0.0
        } else {
            count as f64 / n_disagreements as f64
        }
    };

    Ok(EvalReport {
        n,
        f1_macro: f1_sum / f1_classes as f64,
        confusion,
        per_class,
        n_disagreements,
        adjacent_rate: rate(n_adjacent),
        flip_rate: rate(n_flips),
    })
}

/// Writes the confusion matrix as CSV, gold labels down the side.
pub fn write_confusion_csv<W: Write>(writer: W, report: &EvalReport) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let mut header = vec!["gold \\ predicted".to_string()];
    header.extend(Label::ALL.iter().map(|l| l.name().to_string()));
    out.write_record(&header)?;
    for gold in Label::ALL {
        let mut row = vec![gold.name().to_string()];
        row.extend(report.confusion[gold.index()].iter().map(|c| c.to_string()));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}
