//! Binary dissent per meeting, plus corpus-level rates and conditional
//! probabilities.
//!
//! A meeting's units show dissent when at least one lands on the hawkish
//! side (Hawkish or Mostly Hawkish) and at least one on the dovish side.
//! Statement dissent is computed over sentence units, transcript dissent
//! over speaker units.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{Label, ScoredUnit};
use crate::corpus::{DocumentKind, MeetingId};

/// Dissent flag for one (meeting, kind).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DissentRecord {
    pub meeting: MeetingId,
    pub kind: DocumentKind,
    /// Units labelled Hawkish or Mostly Hawkish.
    pub n_hawkish_side: usize,
    /// Units labelled Dovish or Mostly Dovish.
    pub n_dovish_side: usize,
    pub dissent: bool,
}

/// Numerators and denominators behind the report's ratios, kept for
/// auditability at small n.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    /// Meetings with both a statement and a transcript record.
    pub n_pairs: usize,
    pub n_s1: usize,
    pub n_s0: usize,
    /// Pairs with transcript dissent, split by statement dissent.
    pub n_t1_s1: usize,
    pub n_t1_s0: usize,
}

/// Corpus-level dissent summary.
#[derive(Debug, Clone, Serialize)]
pub struct DissentReport {
    pub records: Vec<DissentRecord>,
    pub n_statements: usize,
    pub n_transcripts: usize,
    /// Fraction of statement records with dissent; absent when there are none.
    pub statement_rate: Option<f64>,
    pub transcript_rate: Option<f64>,
    pub n_pairs: usize,
    pub pair_counts: PairCounts,
    /// P(transcript dissent | statement dissent), over aligned pairs.
    pub p_t_given_s1: Option<f64>,
    /// P(transcript dissent | no statement dissent), over aligned pairs.
    pub p_t_given_s0: Option<f64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DissentError {
    #[error("cannot detect dissent for an empty unit list")]
    Empty,
    #[error("units span more than one (meeting, kind): {first} vs {second}")]
    MixedGroup { first: String, second: String },
}

/// The dissent rule on labels alone: at least one hawkish-side and at least
/// one dovish-side label. False on empty input.
pub fn has_dissent<I: IntoIterator<Item = Label>>(labels: I) -> bool {
    let mut hawkish = false;
    let mut dovish = false;
    for label in labels {
        if label.score() > 0.0 {
            hawkish = true;
        } else if label.score() < 0.0 {
            dovish = true;
        }
        if hawkish && dovish {
            return true;
        }
    }
    false
}

/// Applies the dissent rule to one meeting's units for one document kind.
/// All units must share the same (meeting, kind).
pub fn detect_dissent(units: &[ScoredUnit]) -> Result<DissentRecord, DissentError> {
    let first = units.first().ok_or(DissentError::Empty)?;
    let meeting = first.unit.meeting;
    let kind = first.unit.kind;
    for unit in units {
        if unit.unit.meeting != meeting || unit.unit.kind != kind {
            return Err(DissentError::MixedGroup {
                first: format!("{meeting}/{kind}"),
                second: format!("{}/{}", unit.unit.meeting, unit.unit.kind),
            });
        }
    }
    let n_hawkish_side = units.iter().filter(|u| u.label.score() > 0.0).count();
    let n_dovish_side = units.iter().filter(|u| u.label.score() < 0.0).count();
    Ok(DissentRecord {
        meeting,
        kind,
        n_hawkish_side,
        n_dovish_side,
        dissent: n_hawkish_side >= 1 && n_dovish_side >= 1,
    })
}

/// Summarizes per-meeting records into rates and conditional probabilities.
///
/// Rates are computed per document kind over the records present for that
/// kind; conditionals only over meetings that have both a statement and a
/// transcript record. A zero denominator yields an absent value, never 0.
pub fn dissent_report(records: &[DissentRecord]) -> DissentReport {
    let statements: Vec<&DissentRecord> = records
        .iter()
        .filter(|r| r.kind == DocumentKind::Statement)
        .collect();
    let transcripts: Vec<&DissentRecord> = records
        .iter()
        .filter(|r| r.kind == DocumentKind::Transcript)
        .collect();

    let rate = |items: &[&DissentRecord]| -> Option<f64> {
        if items.is_empty() {
            None
        } else {
            Some(items.iter().filter(|r| r.dissent).count() as f64 / items.len() as f64)
        }
    };

    let mut by_meeting: BTreeMap<MeetingId, (Option<bool>, Option<bool>)> = BTreeMap::new();
    for record in &statements {
        by_meeting.entry(record.meeting).or_default().0 = Some(record.dissent);
    }
    for record in &transcripts {
        by_meeting.entry(record.meeting).or_default().1 = Some(record.dissent);
    }

    let mut pair_counts = PairCounts::default();
    for (s, t) in by_meeting.values() {
        if let (Some(s), Some(t)) = (s, t) {
            pair_counts.n_pairs += 1;
            if *s {
                pair_counts.n_s1 += 1;
                if *t {
                    pair_counts.n_t1_s1 += 1;
                }
            } else {
                pair_counts.n_s0 += 1;
                if *t {
                    pair_counts.n_t1_s0 += 1;
                }
            }
        }
    }

    let ratio = |num: usize, den: usize| -> Option<f64> {
        if den == 0 {
            None
        } else {
            Some(num as f64 / den as f64)
        }
    };

    DissentReport {
        records: records.to_vec(),
        n_statements: statements.len(),
        n_transcripts: transcripts.len(),
        statement_rate: rate(&statements),
        transcript_rate: rate(&transcripts),
        n_pairs: pair_counts.n_pairs,
        pair_counts,
        p_t_given_s1: ratio(pair_counts.n_t1_s1, pair_counts.n_s1),
        p_t_given_s0: ratio(pair_counts.n_t1_s0, pair_counts.n_s0),
    }
}

/// Writes per-meeting dissent records as CSV.
pub fn write_dissent_csv<W: Write>(writer: W, records: &[DissentRecord]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["date", "kind", "n_hawkish_side", "n_dovish_side", "dissent"])?;
    for r in records {
        out.write_record([
            r.meeting.to_string(),
            r.kind.to_string(),
            r.n_hawkish_side.to_string(),
            r.n_dovish_side.to_string(),
            (r.dissent as u8).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
