//! Per-meeting aggregation: unweighted mean and logit-scaled score.
//!
//! The logit score is `ln((Hawk + 0.5) / (Dove + 0.5))` where `Hawk` is the
//! sum of positive unit scores and `Dove` the sum of dovish score magnitudes;
//! Neutral units contribute to neither side. The +0.5 smoothing keeps the
//! ratio finite and positive, and leaves an empty or all-Neutral meeting at
//! exactly 0.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{Granularity, Label, ScoredUnit, Unit};
use crate::corpus::{DocumentKind, MeetingId};

/// Per-category unit counts, indexed dovish to hawkish.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LabelCounts {
    pub n_dovish: usize,
    pub n_mostly_dovish: usize,
    pub n_neutral: usize,
    pub n_mostly_hawkish: usize,
    pub n_hawkish: usize,
}

impl LabelCounts {
    pub fn add(&mut self, label: Label) {
        match label {
            Label::Dovish => self.n_dovish += 1,
            Label::MostlyDovish => self.n_mostly_dovish += 1,
            Label::Neutral => self.n_neutral += 1,
            Label::MostlyHawkish => self.n_mostly_hawkish += 1,
            Label::Hawkish => self.n_hawkish += 1,
        }
    }

    pub fn get(&self, label: Label) -> usize {
        match label {
            Label::Dovish => self.n_dovish,
            Label::MostlyDovish => self.n_mostly_dovish,
            Label::Neutral => self.n_neutral,
            Label::MostlyHawkish => self.n_mostly_hawkish,
            Label::Hawkish => self.n_hawkish,
        }
    }

    pub fn total(&self) -> usize {
        self.n_dovish
            + self.n_mostly_dovish
            + self.n_neutral
            + self.n_mostly_hawkish
            + self.n_hawkish
    }
}

/// Aggregates for one (meeting, kind, granularity) group.
#[derive(Debug, Clone, Serialize)]
pub struct MeetingScores {
    pub meeting: MeetingId,
    pub kind: DocumentKind,
    pub granularity: Granularity,
    pub n_units: usize,
    #[serde(flatten)]
    pub counts: LabelCounts,
    /// Arithmetic mean of unit scores; absent when the group has no units.
    pub mean_score: Option<f64>,
    /// Sum of hawkish-side scores (+0.5 and +1.0 units).
    pub hawk_sum: f64,
    /// Sum of dovish-side score magnitudes (−0.5 and −1.0 units).
    pub dove_sum: f64,
    pub logit_score: f64,
    /// Units dropped from this group because classification failed.
    pub excluded_n: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScoreError {
    #[error("cannot average an empty meeting")]
    EmptyMeeting,
}

/// Unweighted mean of unit scores. Errors on empty input.
pub fn mean_score(units: &[ScoredUnit]) -> Result<f64, ScoreError> {
    if units.is_empty() {
        return Err(ScoreError::EmptyMeeting);
    }
    Ok(units.iter().map(|u| u.score()).sum::<f64>() / units.len() as f64)
}

fn sums_from_labels(labels: impl Iterator<Item = Label>) -> (f64, f64) {
    let mut hawk = 0.0;
    let mut dove = 0.0;
    for label in labels {
        let score = label.score();
        if score > 0.0 {
            hawk += score;
        } else if score < 0.0 {
            dove += -score;
        }
    }
    (hawk, dove)
}

fn logit_from_sums(hawk: f64, dove: f64) -> f64 {
    ((hawk + 0.5) / (dove + 0.5)).ln()
}

/// Sum of hawkish-side scores and sum of dovish-side magnitudes.
pub fn hawk_dove_sums(units: &[ScoredUnit]) -> (f64, f64) {
    sums_from_labels(units.iter().map(|u| u.label))
}

/// Logit-scaled position, `ln((Hawk + 0.5) / (Dove + 0.5))`. Total on any
/// input; Neutral units contribute nothing.
pub fn logit_score(units: &[ScoredUnit]) -> f64 {
    let (hawk, dove) = hawk_dove_sums(units);
    logit_from_sums(hawk, dove)
}

/// Groups scored units by (meeting, kind, granularity) and computes every
/// aggregate, in chronological order. Failed units are counted into their
/// group's `excluded_n` and contribute to nothing else; a group in which
/// every unit failed is emitted with `n_units` 0 and an absent mean.
pub fn meeting_series(scored: &[ScoredUnit], failed: &[Unit]) -> Vec<MeetingScores> {
    let mut groups: BTreeMap<(MeetingId, DocumentKind, Granularity), Vec<&ScoredUnit>> =
        BTreeMap::new();
    for unit in scored {
        groups
            .entry((unit.unit.meeting, unit.unit.kind, unit.unit.granularity))
            .or_default()
            .push(unit);
    }
    let mut excluded: BTreeMap<(MeetingId, DocumentKind, Granularity), usize> = BTreeMap::new();
    for unit in failed {
        *excluded
            .entry((unit.meeting, unit.kind, unit.granularity))
            .or_default() += 1;
        groups
            .entry((unit.meeting, unit.kind, unit.granularity))
            .or_default();
    }

    groups
        .into_iter()
        .map(|((meeting, kind, granularity), units)| {
            let mut counts = LabelCounts::default();
            let mut score_sum = 0.0;
            for unit in &units {
                counts.add(unit.label);
                score_sum += unit.score();
            }
            let (hawk_sum, dove_sum) = sums_from_labels(units.iter().map(|u| u.label));
            MeetingScores {
                meeting,
                kind,
                granularity,
                n_units: units.len(),
                counts,
                mean_score: if units.is_empty() {
                    None
                } else {
                    Some(score_sum / units.len() as f64)
                },
                hawk_sum,
                dove_sum,
                logit_score: logit_from_sums(hawk_sum, dove_sum),
                excluded_n: excluded
                    .get(&(meeting, kind, granularity))
                    .copied()
                    .unwrap_or(0),
            }
        })
        .collect()
}

/// Writes the per-meeting score table as CSV.
pub fn write_scores_csv<W: Write>(writer: W, rows: &[MeetingScores]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record([
        "date",
        "kind",
        "granularity",
        "n_units",
        "n_dovish",
        "n_mostly_dovish",
        "n_neutral",
        "n_mostly_hawkish",
        "n_hawkish",
        "mean_score",
        "hawk_sum",
        "dove_sum",
        "logit_score",
        "excluded_n",
    ])?;
    for row in rows {
        out.write_record([
            row.meeting.to_string(),
            row.kind.to_string(),
            row.granularity.to_string(),
            row.n_units.to_string(),
            row.counts.n_dovish.to_string(),
            row.counts.n_mostly_dovish.to_string(),
            row.counts.n_neutral.to_string(),
            row.counts.n_mostly_hawkish.to_string(),
            row.counts.n_hawkish.to_string(),
            row.mean_score
                .map(|m| format!("{m:.6}"))
                .unwrap_or_default(),
            format!("{:.1}", row.hawk_sum),
            format!("{:.1}", row.dove_sum),
            format!("{:.6}", row.logit_score),
            row.excluded_n.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
