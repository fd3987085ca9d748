//! Transcript partitioning, per-speaker re-aggregation, and sentence
//! segmentation.
//!
//! Transcripts are partitioned on line-initial speaker tags such as
//! `CHAIRMAN GREENSPAN.` or `MR. KOHN.`; the canonical speaker name is the
//! surname, so `CHAIRMAN GREENSPAN` and `MR. GREENSPAN` aggregate together.
//! Statements are segmented into sentences by a rule-based splitter with a
//! fixed (but overridable) abbreviation exception list.

use std::collections::HashSet;
use std::fs;
use std::io::{self, BufRead};
use std::ops::Range;
use std::path::Path;
use std::sync::LazyLock;

use regex::Regex;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{MeetingId, RawDocument};

/// One speaker turn within a transcript.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpeakerTurn {
    /// Canonical speaker name: uppercase surname, honorific stripped.
    pub speaker: String,
    /// Turn ordinal within the transcript, from 0.
    pub index: usize,
    /// The utterance text, trimmed.
    pub text: String,
    /// Byte range of the turn in the document body, including the tag.
    #[serde(skip)]
    pub span: Range<usize>,
}

/// All of one speaker's turns concatenated, in document order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpeakerAggregate {
    pub speaker: String,
    /// Turn texts joined with a single blank line.
    pub text: String,
    pub turn_count: usize,
}

/// A statement sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sentence {
    pub meeting: MeetingId,
    /// Ordinal within the document, contiguous from 0.
    pub index: usize,
    pub text: String,
}

/// Result of [`partition_transcript`]: the turns plus whatever preceded the
/// first speaker tag (attendance lists, titles).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptPartition {
    pub turns: Vec<SpeakerTurn>,
    /// Raw text before the first speaker tag. Contains no deliberation, so it
    /// is dropped from analysis, but kept here so the partition is lossless.
    pub front_matter: String,
}

impl TranscriptPartition {
    pub fn speakers(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for turn in &self.turns {
            if seen.insert(turn.speaker.as_str()) {
                out.push(turn.speaker.as_str());
            }
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum TextParseError {
    #[error("no speakers detected in {document}")]
    NoSpeakers { document: String },
    #[error("failed to read {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Line-initial speaker tag: honorific, surname, terminating period.
static SPEAKER_TAG: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?m)^(?:VICE CHAIRMAN|CHAIRMAN|MR|MS|MRS|GOVERNOR|PRESIDENT|SECRETARY)\.? ([A-Z][A-Z'’-]+)\.",
    )
    .expect("speaker tag regex")
});

/// A speaker tag located in raw text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagMatch {
    /// Byte range of the full tag (honorific through terminating period).
    pub span: Range<usize>,
    /// Canonical speaker name.
    pub speaker: String,
}

/// Finds every line-initial speaker tag in `text`.
pub fn find_speaker_tags(text: &str) -> Vec<TagMatch> {
    SPEAKER_TAG
        .captures_iter(text)
        .map(|caps| {
            let whole = caps.get(0).expect("match");
            let surname = caps.get(1).expect("surname group");
            TagMatch {
                span: whole.start()..whole.end(),
                speaker: canonical_speaker(surname.as_str()),
            }
        })
        .collect()
}

/// Canonical speaker name: the surname, uppercased, curly apostrophes
/// straightened. The same raw tag always maps to the same canonical name.
fn canonical_speaker(surname: &str) -> String {
    surname.trim_end_matches('.').replace('’', "'")
}

/// Partitions a transcript into speaker turns.
///
/// Every byte of the body lands either in the front matter or in exactly one
/// turn's span, so the partition is lossless. Turn `text` is the utterance
/// after the tag, trimmed.
pub fn partition_transcript(doc: &RawDocument) -> Result<TranscriptPartition, TextParseError> {
    let body = doc.text.as_str();
    let tags = find_speaker_tags(body);
    if tags.is_empty() {
        return Err(TextParseError::NoSpeakers {
            document: doc.source.clone(),
        });
    }

    let front_matter = body[..tags[0].span.start].to_string();
    if !front_matter.trim().is_empty() {
        log::info!(
            "{} {}: dropped {} bytes of front matter before first speaker tag",
            doc.meeting,
            doc.kind,
            front_matter.len()
        );
    }

    let mut turns = Vec::with_capacity(tags.len());
    for (index, tag) in tags.iter().enumerate() {
        let end = tags
            .get(index + 1)
            .map(|next| next.span.start)
            .unwrap_or(body.len());
        let text = body[tag.span.end..end].trim().to_string();
        turns.push(SpeakerTurn {
            speaker: tag.speaker.clone(),
            index,
            text,
            span: tag.span.start..end,
        });
    }

    Ok(TranscriptPartition {
        turns,
        front_matter,
    })
}

/// Re-aggregates turns per unique speaker, ordered by first appearance.
pub fn aggregate_by_speaker(turns: &[SpeakerTurn]) -> Vec<SpeakerAggregate> {
    let mut order: Vec<String> = Vec::new();
    let mut texts: std::collections::HashMap<String, (Vec<&str>, usize)> =
        std::collections::HashMap::new();
    for turn in turns {
        let entry = texts.entry(turn.speaker.clone()).or_insert_with(|| {
            order.push(turn.speaker.clone());
            (Vec::new(), 0)
        });
        entry.0.push(turn.text.as_str());
        entry.1 += 1;
    }
    order
        .into_iter()
        .map(|speaker| {
            let (parts, turn_count) = texts.remove(&speaker).expect("speaker recorded");
            SpeakerAggregate {
                speaker,
                text: parts.join("\n\n"),
                turn_count,
            }
        })
        .collect()
}

/// Abbreviations whose trailing period does not end a sentence.
///
/// Entries are stored lowercase without the trailing period, so `U.S.` is
/// held as `u.s`. Any single letter before a period is also treated as an
/// abbreviation (initials).
#[derive(Debug, Clone)]
pub struct AbbreviationSet {
    entries: HashSet<String>,
}

const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "u.s", "u.s.a", "u.k", "mr", "ms", "mrs", "dr", "pp", "no", "vs", "etc", "pct", "jan", "feb",
    "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
];

impl AbbreviationSet {
    /// The built-in list: honorifics, `U.S.`, months, and a few common
    /// document abbreviations.
    pub fn default_set() -> Self {
        AbbreviationSet {
            entries: DEFAULT_ABBREVIATIONS
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }

    /// Loads one abbreviation per line; blank lines and `#` comments skipped.
    pub fn from_reader<R: BufRead>(reader: R) -> io::Result<Self> {
        let mut entries = HashSet::new();
        for line in reader.lines() {
            let line = line?;
            let token = line.trim();
            if token.is_empty() || token.starts_with('#') {
                continue;
            }
            entries.insert(token.trim_end_matches('.').to_lowercase());
        }
        Ok(AbbreviationSet { entries })
    }

    pub fn from_file(path: &Path) -> Result<Self, TextParseError> {
        let file = fs::File::open(path).map_err(|source| TextParseError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(io::BufReader::new(file)).map_err(|source| TextParseError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    fn contains(&self, token: &str) -> bool {
        self.entries.contains(token)
    }
}

/// Splits text into sentences using the default abbreviation list.
pub fn split_sentences(text: &str) -> Vec<String> {
    split_sentences_with(text, &AbbreviationSet::default_set())
}

/// Splits text into sentences.
///
/// A sentence ends at `.`, `?`, or `!` followed by whitespace and an
/// uppercase letter, except when the period terminates a known abbreviation
/// or a single-letter initial. Runs of terminators (`...`, `?!`) stay within
/// one sentence. Concatenating the results reproduces the input modulo
/// whitespace.
pub fn split_sentences_with(text: &str, abbreviations: &AbbreviationSet) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize;

    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if matches!(ch, '.' | '?' | '!') {
            // Consume the full terminator run so ellipses stay together.
            let mut j = i;
            while j + 1 < chars.len() && matches!(chars[j + 1].1, '.' | '?' | '!') {
                j += 1;
            }
            if is_boundary(&chars, j)
                && !(ch == '.' && i == j && ends_in_abbreviation(&text[start..pos], abbreviations))
            {
                // A closing quote or bracket right after the terminator
                // belongs to the ending sentence.
                let mut end = j;
                if end + 1 < chars.len() && is_closing_delimiter(chars[end + 1].1) {
                    end += 1;
                }
                let run_end = chars[end].0 + chars[end].1.len_utf8();
                let sentence = text[start..run_end].trim();
                if !sentence.is_empty() {
                    sentences.push(sentence.to_string());
                }
                start = run_end;
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }

    let tail = text[start..].trim();
    if !tail.is_empty() {
        sentences.push(tail.to_string());
    }
    sentences
}

fn is_closing_delimiter(c: char) -> bool {
    matches!(c, '"' | '”' | '\'' | '’' | ')' | ']')
}

/// True when the terminator at `chars[idx]` is followed by whitespace and
/// then an uppercase letter (skipping a closing quote or parenthesis).
fn is_boundary(chars: &[(usize, char)], idx: usize) -> bool {
    let mut k = idx + 1;
    if k < chars.len() && is_closing_delimiter(chars[k].1) {
        k += 1;
    }
    let mut saw_whitespace = false;
    while k < chars.len() && chars[k].1.is_whitespace() {
        saw_whitespace = true;
        k += 1;
    }
    if k >= chars.len() {
        // Terminator at end of text closes the final sentence.
        return true;
    }
    saw_whitespace && chars[k].1.is_uppercase()
}

/// True when `prefix` ends with a token whose trailing period would belong to
/// an abbreviation, so the period must not split the sentence.
fn ends_in_abbreviation(prefix: &str, abbreviations: &AbbreviationSet) -> bool {
    let token = prefix
        .rsplit(|c: char| c.is_whitespace())
        .next()
        .unwrap_or("");
    let token =
        token.trim_matches(|c: char| matches!(c, '"' | '“' | '”' | '(' | ')' | '[' | ']' | ','));
    if token.is_empty() {
        return false;
    }
    if token.chars().count() == 1 && token.chars().next().unwrap().is_alphabetic() {
        return true;
    }
    abbreviations.contains(&token.to_lowercase())
}

/// Segments a statement into ordered sentences. An empty document yields an
/// empty list.
pub fn segment_sentences(doc: &RawDocument) -> Vec<Sentence> {
    segment_sentences_with(doc, &AbbreviationSet::default_set())
}

pub fn segment_sentences_with(doc: &RawDocument, abbreviations: &AbbreviationSet) -> Vec<Sentence> {
    split_sentences_with(&doc.text, abbreviations)
        .into_iter()
        .enumerate()
        .map(|(index, text)| Sentence {
            meeting: doc.meeting,
            index,
            text,
        })
        .collect()
}
