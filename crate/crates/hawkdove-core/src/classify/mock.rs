//! The deterministic offline backend.
//!
//! Classification is a keyword count: occurrences of hawkish lexicon phrases
//! minus occurrences of dovish lexicon phrases, with the net count mapped to
//! a label. Zero is Neutral, ±1 the Mostly categories, ±2 or beyond the full
//! categories. Pure, reentrant, and versioned through [`MOCK_MODEL_ID`], so
//! pipelines run offline byte-for-byte reproducibly.

use std::sync::LazyLock;

use regex::Regex;

use super::backend::{BackendError, ClassifierBackend};
use super::label::Label;

/// Identity string recorded for mock classifications. Bump when the lexicons
/// or the mapping change.
pub const MOCK_MODEL_ID: &str = "mock-lexicon-v1";

/// Phrases counted toward the hawkish side.
pub const HAWKISH_TERMS: &[&str] = &[
    "raise",
    "raising",
    "hike",
    "tighten",
    "tightening",
    "inflation pressures",
    "inflationary",
    "overheat",
    "overheating",
    "restrictive",
    "upside risk",
    "upside risks",
];

/// Phrases counted toward the dovish side.
pub const DOVISH_TERMS: &[&str] = &[
    "cut",
    "cuts",
    "cutting",
    "easing",
    "stimulus",
    "accommodative",
    "accommodation",
    "weak",
    "weakness",
    "downside risk",
    "downside risks",
];

static HAWKISH_PATTERNS: LazyLock<Vec<Regex>> = LazyLock::new(|| compile(HAWKISH_TERMS));
static DOVISH_PATTERNS: LazyLock<Vec<Regex>> = LazyLock::new(|| compile(DOVISH_TERMS));

fn compile(terms: &[&str]) -> Vec<Regex> {
    terms
        .iter()
        .map(|term| {
            Regex::new(&format!(r"(?i)\b{}\b", regex::escape(term))).expect("lexicon pattern")
        })
        .collect()
}

fn count_terms(text: &str, patterns: &[Regex]) -> usize {
    patterns.iter().map(|p| p.find_iter(text).count()).sum()
}

/// Labels text by net keyword count (hawkish hits minus dovish hits).
pub fn mock_classify(text: &str) -> Label {
    let hawk = count_terms(text, &HAWKISH_PATTERNS) as i64;
    let dove = count_terms(text, &DOVISH_PATTERNS) as i64;
    match hawk - dove {
        0 => Label::Neutral,
        1 => Label::MostlyHawkish,
        -1 => Label::MostlyDovish,
        net if net >= 2 => Label::Hawkish,
        _ => Label::Dovish,
    }
}

/// [`ClassifierBackend`] wrapper around [`mock_classify`].
///
/// The unit text is recovered from between the document tags of the prompt,
/// so template wording and few-shot examples never leak into the counts.
#[derive(Debug, Default, Clone, Copy)]
pub struct MockBackend;

impl MockBackend {
    pub fn new() -> Self {
        MockBackend
    }
}

impl ClassifierBackend for MockBackend {
    fn model_id(&self) -> &str {
        MOCK_MODEL_ID
    }

    fn complete(&self, prompt: &str) -> Result<String, BackendError> {
        let input = extract_input(prompt).ok_or_else(|| BackendError::Malformed {
            message: "prompt has no document tags".into(),
        })?;
        Ok(mock_classify(input).name().to_string())
    }
}

/// Pulls the text between `<statement>`/`</statement>` (or the minutes or
/// transcript equivalents) out of a rendered prompt.
fn extract_input(prompt: &str) -> Option<&str> {
    for word in ["statement", "minutes", "transcript"] {
        let open = format!("<{word}>");
        let close = format!("</{word}>");
        if let Some(start) = prompt.find(&open) {
            if let Some(end) = prompt.rfind(&close) {
                let inner_start = start + open.len();
                if inner_start <= end {
                    return Some(prompt[inner_start..end].trim_matches('\n'));
                }
            }
        }
    }
    None
}
