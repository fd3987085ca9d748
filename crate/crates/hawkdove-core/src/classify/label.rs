//! The five-point hawk/dove label and its fixed numeric mapping.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Hawk/dove category with score mapping Dovish −1.0, Mostly Dovish −0.5,
/// Neutral 0, Mostly Hawkish +0.5, Hawkish +1.0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "Dovish")]
    Dovish,
    #[serde(rename = "Mostly Dovish")]
    MostlyDovish,
    #[serde(rename = "Neutral")]
    Neutral,
    #[serde(rename = "Mostly Hawkish")]
    MostlyHawkish,
    #[serde(rename = "Hawkish")]
    Hawkish,
}

impl Label {
    /// All five categories, dovish to hawkish.
    pub const ALL: [Label; 5] = [
        Label::Dovish,
        Label::MostlyDovish,
        Label::Neutral,
        Label::MostlyHawkish,
        Label::Hawkish,
    ];

    pub fn score(self) -> f64 {
        match self {
            Label::Dovish => -1.0,
            Label::MostlyDovish => -0.5,
            Label::Neutral => 0.0,
            Label::MostlyHawkish => 0.5,
            Label::Hawkish => 1.0,
        }
    }

    pub fn from_score(score: f64) -> Option<Label> {
        Label::ALL.into_iter().find(|label| label.score() == score)
    }

    /// Canonical display name (`Mostly Hawkish`).
    pub fn name(self) -> &'static str {
        match self {
            Label::Dovish => "Dovish",
            Label::MostlyDovish => "Mostly Dovish",
            Label::Neutral => "Neutral",
            Label::MostlyHawkish => "Mostly Hawkish",
            Label::Hawkish => "Hawkish",
        }
    }

    /// Position in [`Label::ALL`]; used to index confusion matrices.
    pub fn index(self) -> usize {
        match self {
            Label::Dovish => 0,
            Label::MostlyDovish => 1,
            Label::Neutral => 2,
            Label::MostlyHawkish => 3,
            Label::Hawkish => 4,
        }
    }

    /// Swaps the hawkish and dovish sides; Neutral is its own mirror.
    pub fn mirror(self) -> Label {
        match self {
            Label::Dovish => Label::Hawkish,
            Label::MostlyDovish => Label::MostlyHawkish,
            Label::Neutral => Label::Neutral,
            Label::MostlyHawkish => Label::MostlyDovish,
            Label::Hawkish => Label::Dovish,
        }
    }

    /// Parses the exact category name, case-insensitively, with any
    /// whitespace between the two words of the `Mostly` categories.
    pub fn parse_name(s: &str) -> Option<Label> {
        let folded = s.trim().to_lowercase();
        let folded = folded.split_whitespace().collect::<Vec<_>>().join(" ");
        Label::ALL
            .into_iter()
            .find(|label| label.name().to_lowercase() == folded)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
