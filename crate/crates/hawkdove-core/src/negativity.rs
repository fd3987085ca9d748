//! Lexicon-based negativity analysis of transcript topics.
//!
//! Each sentence gets a negativity score in [0, 1]: the negative valence
//! mass of its lexicon-scored tokens over their total valence mass. Per
//! topic span, sentences at or above a threshold count as negative; the
//! distinct-speaker count per span is kept as the conversation-length
//! baseline.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::{BufRead, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::RawDocument;
use crate::textparse::{find_speaker_tags, split_sentences};

/// Token → valence map. Negative valences mark negative tokens; magnitude is
/// the token's weight.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, f64>,
}

/// Small built-in lexicon so tests and demos run without external data.
/// Drop in the full VADER file via [`Lexicon::from_file`] for real use.
const BUILTIN_LEXICON: &[(&str, f64)] = &[
    ("bad", -2.5),
    ("concern", -1.4),
    ("concerns", -1.4),
    ("crisis", -3.1),
    ("decline", -1.7),
    ("declined", -1.7),
    ("declines", -1.7),
    ("disagree", -1.3),
    ("disagreement", -1.4),
    ("doubt", -1.5),
    ("doubts", -1.5),
    ("drag", -1.1),
    ("failure", -2.3),
    ("fear", -2.2),
    ("fears", -2.2),
    ("loss", -1.3),
    ("losses", -1.7),
    ("oppose", -1.6),
    ("panic", -3.0),
    ("problem", -1.6),
    ("problems", -1.6),
    ("recession", -2.5),
    ("risk", -1.1),
    ("risks", -1.1),
    ("shortfall", -1.6),
    ("slump", -2.0),
    ("stress", -1.8),
    ("terrible", -3.1),
    ("turmoil", -2.4),
    ("uncertain", -1.2),
    ("uncertainty", -1.4),
    ("volatile", -1.3),
    ("volatility", -1.3),
    ("weak", -1.9),
    ("weakness", -1.8),
    ("worry", -1.6),
    ("worse", -2.1),
    ("worst", -3.1),
    ("agree", 1.5),
    ("agreement", 1.6),
    ("confidence", 2.1),
    ("confident", 2.2),
    ("favorable", 1.9),
    ("gain", 1.5),
    ("gains", 1.6),
    ("good", 1.9),
    ("growth", 1.4),
    ("healthy", 2.1),
    ("improve", 1.9),
    ("improved", 2.1),
    ("improvement", 2.0),
    ("optimistic", 2.4),
    ("progress", 1.8),
    ("recovery", 1.8),
    ("robust", 2.0),
    ("solid", 1.5),
    ("stability", 1.3),
    ("stable", 1.2),
    ("strength", 2.0),
    ("strong", 2.3),
    ("support", 1.7),
];

impl Lexicon {
    pub fn builtin() -> Lexicon {
        Lexicon {
            entries: BUILTIN_LEXICON
                .iter()
                .map(|(token, valence)| (token.to_string(), *valence))
                .collect(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, f64)>>(pairs: I) -> Lexicon {
        Lexicon {
            entries: pairs.into_iter().collect(),
        }
    }

    /// Parses `token<TAB>valence[<TAB>...extra columns ignored]` lines, the
    /// layout of the published VADER lexicon file. Plain `token valence`
    /// rows, blank lines, and `#` comments are also accepted.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Lexicon, NegativityError> {
        let mut entries = HashMap::new();
        for (line_no, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| NegativityError::Io {
                path: PathBuf::from("<reader>"),
                source,
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split('\t');
            let (token, valence_text) = match (fields.next(), fields.next()) {
                (Some(token), Some(valence)) => (token, valence),
                _ => {
                    let mut fields = trimmed.split_whitespace();
                    match (fields.next(), fields.next()) {
                        (Some(token), Some(valence)) => (token, valence),
                        _ => {
                            return Err(NegativityError::BadLexiconLine {
                                line: line_no + 1,
                                content: trimmed.to_string(),
                            })
                        }
                    }
                }
            };
            let valence: f64 =
                valence_text
                    .trim()
                    .parse()
                    .map_err(|_| NegativityError::BadLexiconLine {
                        line: line_no + 1,
                        content: trimmed.to_string(),
                    })?;
            entries.insert(token.to_lowercase(), valence);
        }
        Ok(Lexicon { entries })
    }

    pub fn from_file(path: &Path) -> Result<Lexicon, NegativityError> {
        let file = fs::File::open(path).map_err(|source| NegativityError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Lexicon::from_reader(std::io::BufReader::new(file))
    }

    pub fn valence(&self, token: &str) -> Option<f64> {
        self.entries.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A hand-marked topic section of a transcript. Line numbers are 0-based,
/// `start_line` inclusive, `end_line` exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicSpan {
    pub topic: String,
    pub start_line: usize,
    pub end_line: usize,
}

/// Loads topic spans from a JSON array of `{topic, start_line, end_line}`.
pub fn load_topic_spans(path: &Path) -> Result<Vec<TopicSpan>, NegativityError> {
    let text = fs::read_to_string(path).map_err(|source| NegativityError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|err| NegativityError::BadTopicConfig {
        path: path.to_path_buf(),
        message: err.to_string(),
    })
}

/// Per-topic negativity summary at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativityResult {
    pub topic: String,
    pub n_sentences: usize,
    pub n_negative: usize,
    /// Absent when the span contains no sentences.
    pub fraction_negative: Option<f64>,
    pub n_speakers: usize,
    pub threshold: f64,
}

#[derive(Debug, Error)]
pub enum NegativityError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon line {line} is malformed: {content:?}")]
    BadLexiconLine { line: usize, content: String },
    #[error("topic config {path} is invalid: {message}")]
    BadTopicConfig { path: PathBuf, message: String },
    #[error(
        "topic `{topic}` spans lines {start_line}..{end_line} but the document has {lines} lines"
    )]
    SpanOutOfBounds {
        topic: String,
        start_line: usize,
        end_line: usize,
        lines: usize,
    },
    #[error("topic `{topic}` has an empty span ({start_line}..{end_line})")]
    EmptySpan {
        topic: String,
        start_line: usize,
        end_line: usize,
    },
    #[error("topics `{first}` and `{second}` overlap")]
    OverlappingSpans { first: String, second: String },
    #[error("topic name `{topic}` appears more than once")]
    DuplicateTopic { topic: String },
}

/// Negative-proportion score of one sentence: Σ|valence| over negative
/// tokens divided by Σ|valence| over all lexicon-scored tokens. 0 for an
/// empty sentence or one without scored tokens. Always in [0, 1].
pub fn negativity_score(sentence: &str, lexicon: &Lexicon) -> f64 {
    let mut negative_mass = 0.0;
    let mut total_mass = 0.0;
    for token in tokenize(sentence) {
        if let Some(valence) = lexicon.valence(&token) {
            total_mass += valence.abs();
            if valence < 0.0 {
                negative_mass += valence.abs();
            }
        }
    }
    if total_mass == 0.0 {
        0.0
    } else {
        negative_mass / total_mass
    }
}

fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '’'))
        .filter(|t| !t.is_empty())
        .map(|t| t.trim_matches(|c| c == '\'' || c == '’').to_lowercase())
        .filter(|t| !t.is_empty())
}

fn checked_spans(
    doc: &RawDocument,
    spans: &[TopicSpan],
) -> Result<Vec<(TopicSpan, String)>, NegativityError> {
    let lines: Vec<&str> = doc.text.lines().collect();
    let mut names = HashSet::new();
    for span in spans {
        if !names.insert(span.topic.as_str()) {
            return Err(NegativityError::DuplicateTopic {
                topic: span.topic.clone(),
            });
        }
        if span.start_line >= span.end_line {
            return Err(NegativityError::EmptySpan {
                topic: span.topic.clone(),
                start_line: span.start_line,
                end_line: span.end_line,
            });
        }
        if span.end_line > lines.len() {
            return Err(NegativityError::SpanOutOfBounds {
                topic: span.topic.clone(),
                start_line: span.start_line,
                end_line: span.end_line,
                lines: lines.len(),
            });
        }
    }
    let mut ordered: Vec<&TopicSpan> = spans.iter().collect();
    ordered.sort_by_key(|s| s.start_line);
    for pair in ordered.windows(2) {
        if pair[1].start_line < pair[0].end_line {
            return Err(NegativityError::OverlappingSpans {
                first: pair[0].topic.clone(),
                second: pair[1].topic.clone(),
            });
        }
    }
    Ok(spans
        .iter()
        .map(|span| {
            let text = lines[span.start_line..span.end_line].join("\n");
            (span.clone(), text)
        })
        .collect())
}

fn analyze_span(text: &str, threshold: f64, lexicon: &Lexicon) -> (usize, usize, HashSet<String>) {
    let tags = find_speaker_tags(text);
    // Strip the tags before segmenting so `MR. KOHN.` does not count as a
    // sentence of its own and dilute the fractions.
    let mut dialogue = String::with_capacity(text.len());
    let mut cursor = 0;
    for tag in &tags {
        dialogue.push_str(&text[cursor..tag.span.start]);
        cursor = tag.span.end;
    }
    dialogue.push_str(&text[cursor..]);

    let sentences = split_sentences(&dialogue);
    let n_negative = sentences
        .iter()
        .filter(|s| negativity_score(s, lexicon) >= threshold)
        .count();
    let speakers: HashSet<String> = tags.into_iter().map(|tag| tag.speaker).collect();
    (sentences.len(), n_negative, speakers)
}

/// Scores each topic span: sentence count, negative-sentence count at the
/// threshold, and the distinct-speaker baseline.
pub fn negative_fraction_by_topic(
    doc: &RawDocument,
    spans: &[TopicSpan],
    threshold: f64,
    lexicon: &Lexicon,
) -> Result<Vec<NegativityResult>, NegativityError> {
    let checked = checked_spans(doc, spans)?;
    Ok(checked
        .into_iter()
        .map(|(span, text)| {
            let (n_sentences, n_negative, speakers) = analyze_span(&text, threshold, lexicon);
            NegativityResult {
                topic: span.topic,
                n_sentences,
                n_negative,
                fraction_negative: if n_sentences == 0 {
                    None
                } else {
                    Some(n_negative as f64 / n_sentences as f64)
                },
                n_speakers: speakers.len(),
                threshold,
            }
        })
        .collect())
}

/// The all-data row: the same analysis over the union of every span.
pub fn overall_negativity(
    doc: &RawDocument,
    spans: &[TopicSpan],
    threshold: f64,
    lexicon: &Lexicon,
) -> Result<NegativityResult, NegativityError> {
    let checked = checked_spans(doc, spans)?;
    let mut n_sentences = 0;
    let mut n_negative = 0;
    let mut speakers: HashSet<String> = HashSet::new();
    for (_, text) in &checked {
        let (sentences, negatives, span_speakers) = analyze_span(text, threshold, lexicon);
        n_sentences += sentences;
        n_negative += negatives;
        speakers.extend(span_speakers);
    }
    Ok(NegativityResult {
        topic: "ALL".into(),
        n_sentences,
        n_negative,
        fraction_negative: if n_sentences == 0 {
            None
        } else {
            Some(n_negative as f64 / n_sentences as f64)
        },
        n_speakers: speakers.len(),
        threshold,
    })
}

/// Writes negativity rows as CSV.
pub fn write_negativity_csv<W: Write>(writer: W, rows: &[NegativityResult]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record([
        "topic",
        "n_sentences",
        "n_negative",
        "fraction_negative",
        "n_speakers",
        "threshold",
    ])?;
    for row in rows {
        out.write_record([
            row.topic.clone(),
            row.n_sentences.to_string(),
            row.n_negative.to_string(),
            row.fraction_negative
                .map(|f| format!("{f:.6}"))
                .unwrap_or_default(),
            row.n_speakers.to_string(),
            format!("{}", row.threshold),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Convenience for reading negativity CSV back in tests and plots.
pub fn read_negativity_csv<R: Read>(reader: R) -> Result<Vec<NegativityResult>, csv::Error> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for record in csv_reader.records() {
        let record = record?;
        let fraction = record.get(3).unwrap_or("");
        out.push(NegativityResult {
            topic: record.get(0).unwrap_or("").to_string(),
            n_sentences: record.get(1).unwrap_or("0").parse().unwrap_or(0),
            n_negative: record.get(2).unwrap_or("0").parse().unwrap_or(0),
            fraction_negative: if fraction.is_empty() {
                None
            } else {
                fraction.parse().ok()
            },
            n_speakers: record.get(4).unwrap_or("0").parse().unwrap_or(0),
            threshold: record.get(5).unwrap_or("0").parse().unwrap_or(0.0),
        });
    }
    Ok(out)
}
