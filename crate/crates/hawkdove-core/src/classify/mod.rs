//! Five-point hawk/dove classification of text units.
//!
//! A [`Unit`] is a piece of text to be labelled: one statement sentence, one
//! speaker's aggregated transcript remarks, or a whole document. Units go
//! through [`classify_units`], which renders the prompt, consults the cache,
//! and otherwise calls the configured [`ClassifierBackend`], retrying
//! transient failures and collecting per-unit errors without aborting the
//! batch.

mod backend;
mod cache;
mod label;
mod mock;
pub mod prompt;

pub use backend::{BackendError, ClassifierBackend, HttpBackend};
pub use cache::{cache_key, sha256_hex, Cache, CacheError, CacheRecord};
pub use label::Label;
pub use mock::{mock_classify, MockBackend, DOVISH_TERMS, HAWKISH_TERMS, MOCK_MODEL_ID};
pub use prompt::{build_prompt, parse_label, LabelParseError, PROMPT_TEMPLATE};

use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{DocumentKind, MeetingId, RawDocument};
use crate::textparse::{Sentence, SpeakerAggregate};

/// What a unit's text covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Sentence,
    Speaker,
    #[serde(rename = "document")]
    WholeDocument,
}

impl Granularity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Granularity::Sentence => "sentence",
            Granularity::Speaker => "speaker",
            Granularity::WholeDocument => "document",
        }
    }

    pub fn parse(s: &str) -> Option<Granularity> {
        match s.to_ascii_lowercase().as_str() {
            "sentence" => Some(Granularity::Sentence),
            "speaker" => Some(Granularity::Speaker),
            "document" | "wholedocument" | "whole_document" => Some(Granularity::WholeDocument),
            _ => None,
        }
    }
}

impl std::fmt::Display for Granularity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One classifiable text unit. `key` is the sentence index, the speaker
/// name, or `doc` for whole documents; (meeting, kind, granularity, key) is
/// unique within a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Unit {
    pub meeting: MeetingId,
    pub kind: DocumentKind,
    pub granularity: Granularity,
    pub key: String,
    pub text: String,
}

impl Unit {
    /// Stable identity string for logs and error manifests.
    pub fn id(&self) -> String {
        format!(
            "{}/{}/{}/{}",
            self.meeting, self.kind, self.granularity, self.key
        )
    }
}

/// A unit plus its label and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredUnit {
    pub unit: Unit,
    pub label: Label,
    pub model_id: String,
    pub cached: bool,
}

impl ScoredUnit {
    pub fn score(&self) -> f64 {
        self.label.score()
    }
}

/// A labelled example prepended to prompts in few-shot mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FewShotExample {
    pub text: String,
    pub label: Label,
}

/// Loads few-shot examples from JSON Lines of `{"text": ..., "label": ...}`.
pub fn load_few_shot(path: &Path) -> Result<Vec<FewShotExample>, ClassifyError> {
    let file = fs::File::open(path).map_err(|source| ClassifyError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut examples = Vec::new();
    for (line_no, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| ClassifyError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let example: FewShotExample =
            serde_json::from_str(&line).map_err(|err| ClassifyError::BadFewShot {
                path: path.to_path_buf(),
                line: line_no + 1,
                message: err.to_string(),
            })?;
        if example.text.trim().is_empty() {
            return Err(ClassifyError::BadFewShot {
                path: path.to_path_buf(),
                line: line_no + 1,
                message: "example text is empty".into(),
            });
        }
        examples.push(example);
    }
    Ok(examples)
}

/// Unit constructors for the three measurement granularities.
pub fn units_from_sentences(kind: DocumentKind, sentences: &[Sentence]) -> Vec<Unit> {
    sentences
        .iter()
        .map(|s| Unit {
            meeting: s.meeting,
            kind,
            granularity: Granularity::Sentence,
            key: s.index.to_string(),
            text: s.text.clone(),
        })
        .collect()
}

pub fn units_from_speakers(
    meeting: MeetingId,
    kind: DocumentKind,
    aggregates: &[SpeakerAggregate],
) -> Vec<Unit> {
    aggregates
        .iter()
        .map(|a| Unit {
            meeting,
            kind,
            granularity: Granularity::Speaker,
            key: a.speaker.clone(),
            text: a.text.clone(),
        })
        .collect()
}

pub fn unit_whole_document(doc: &RawDocument) -> Unit {
    Unit {
        meeting: doc.meeting,
        kind: doc.kind,
        granularity: Granularity::WholeDocument,
        key: "doc".into(),
        text: doc.text.clone(),
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("transport failure after {attempts} attempt(s): {source}")]
    Transport {
        attempts: u32,
        #[source]
        source: BackendError,
    },
    #[error("unparseable label after {attempts} attempt(s): {source}")]
    Label {
        attempts: u32,
        #[source]
        source: LabelParseError,
    },
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: invalid few-shot example: {message}")]
    BadFewShot {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("invalid scored-unit row {line}: {message}")]
    BadCsvRow { line: usize, message: String },
}

/// A unit that could not be classified, with the terminal error.
#[derive(Debug)]
pub struct UnitError {
    pub unit: Unit,
    pub error: ClassifyError,
}

/// Knobs for [`classify_units`].
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Retries after the first attempt (2 means up to 3 calls per unit).
    pub retries: u32,
    /// Maximum concurrent in-flight backend calls.
    pub parallelism: usize,
    /// Base backoff delay, doubled per retry.
    pub backoff: Duration,
    /// Unit texts longer than this many characters are truncated tail-first
    /// before prompting, with a warning. `None` disables truncation.
    pub max_unit_chars: Option<usize>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            retries: 2,
            parallelism: 4,
            backoff: Duration::from_millis(250),
            max_unit_chars: Some(100_000),
        }
    }
}

/// Result of a batch run: successes in input order, failures in a manifest,
/// and call accounting for cache-hit reporting.
#[derive(Debug, Default)]
pub struct BatchOutcome {
    pub scored: Vec<ScoredUnit>,
    pub errors: Vec<UnitError>,
    pub backend_calls: usize,
    pub cache_hits: usize,
}

/// Classifies a batch of units.
///
/// The cache is consulted before the backend; parse failures and transport
/// errors are retried up to `opts.retries` extra attempts and then surfaced
/// per unit without aborting the batch. Output order follows input order
/// regardless of completion order.
pub fn classify_units(
    units: &[Unit],
    backend: &dyn ClassifierBackend,
    cache: &Cache,
    few_shot: &[FewShotExample],
    opts: &ClassifyOptions,
) -> Result<BatchOutcome, ClassifyError> {
    let parallelism = opts.parallelism.max(1);
    let backend_calls = AtomicUsize::new(0);
    let cache_hits = AtomicUsize::new(0);

    let mut slots: Vec<Option<Result<ScoredUnit, UnitError>>> =
        (0..units.len()).map(|_| None).collect();
    let next = AtomicUsize::new(0);

    std::thread::scope(|scope| {
        let (result_tx, result_rx) = mpsc::channel();
        for _ in 0..parallelism.min(units.len().max(1)) {
            let result_tx = result_tx.clone();
            let next = &next;
            let backend_calls = &backend_calls;
            let cache_hits = &cache_hits;
            scope.spawn(move || loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= units.len() {
                    break;
                }
                let outcome = classify_one(
                    &units[idx],
                    backend,
                    cache,
                    few_shot,
                    opts,
                    backend_calls,
                    cache_hits,
                );
                if result_tx.send((idx, outcome)).is_err() {
                    break;
                }
            });
        }
        drop(result_tx);
        for (idx, outcome) in result_rx {
            slots[idx] = Some(outcome);
        }
    });

    let mut batch = BatchOutcome {
        backend_calls: backend_calls.into_inner(),
        cache_hits: cache_hits.into_inner(),
        ..BatchOutcome::default()
    };
    for slot in slots {
        match slot.expect("every unit processed") {
            Ok(scored) => batch.scored.push(scored),
            Err(err) => match err.error {
                // A broken cache poisons the whole run; bail out.
                ClassifyError::Cache(cache_err) => return Err(ClassifyError::Cache(cache_err)),
                _ => batch.errors.push(err),
            },
        }
    }
    Ok(batch)
}

fn classify_one(
    unit: &Unit,
    backend: &dyn ClassifierBackend,
    cache: &Cache,
    few_shot: &[FewShotExample],
    opts: &ClassifyOptions,
    backend_calls: &AtomicUsize,
    cache_hits: &AtomicUsize,
) -> Result<ScoredUnit, UnitError> {
    let mut unit = unit.clone();
    if let Some(budget) = opts.max_unit_chars {
        let char_count = unit.text.chars().count();
        if char_count > budget {
            let cut = unit
                .text
                .char_indices()
                .nth(budget)
                .map(|(byte, _)| byte)
                .unwrap_or(unit.text.len());
            log::warn!(
                "{}: truncating unit from {char_count} to {budget} chars (tail dropped)",
                unit.id()
            );
            unit.text.truncate(cut);
        }
    }

    let prompt = build_prompt(&unit, few_shot, unit.kind.as_str());
    let params = backend.params();
    let key = cache_key(&prompt, backend.model_id(), &params);

    if let Some(record) = cache.get(&key) {
        cache_hits.fetch_add(1, Ordering::Relaxed);
        return Ok(ScoredUnit {
            unit,
            label: record.label,
            model_id: record.model_id,
            cached: true,
        });
    }

    let attempts = opts.retries + 1;
    let mut last_error: Option<ClassifyError> = None;
    for attempt in 0..attempts {
        if attempt > 0 {
            std::thread::sleep(opts.backoff * 2u32.pow(attempt - 1));
        }
        backend_calls.fetch_add(1, Ordering::Relaxed);
        match backend.complete(&prompt) {
            Ok(raw) => match parse_label(&raw) {
                Ok(label) => {
                    let record = CacheRecord {
                        key: key.clone(),
                        prompt_sha256: sha256_hex(&prompt),
                        model_id: backend.model_id().to_string(),
                        params: params.clone(),
                        raw_response: raw,
                        label,
                        timestamp: chrono::Utc::now().to_rfc3339(),
                    };
                    if let Err(err) = cache.put(record) {
                        return Err(UnitError {
                            unit,
                            error: ClassifyError::Cache(err),
                        });
                    }
                    return Ok(ScoredUnit {
                        unit,
                        label,
                        model_id: backend.model_id().to_string(),
                        cached: false,
                    });
                }
                Err(parse_err) => {
                    last_error = Some(ClassifyError::Label {
                        attempts: attempt + 1,
                        source: parse_err,
                    });
                }
            },
            Err(backend_err) => {
                last_error = Some(ClassifyError::Transport {
                    attempts: attempt + 1,
                    source: backend_err,
                });
            }
        }
    }

    Err(UnitError {
        unit,
        error: last_error.expect("at least one attempt"),
    })
}

/// Writes scored units as CSV: date, kind, granularity, key, category,
/// score, cached.
pub fn write_scored_csv<W: Write>(writer: W, scored: &[ScoredUnit]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record([
        "date",
        "kind",
        "granularity",
        "key",
        "category",
        "score",
        "cached",
    ])?;
    for s in scored {
        out.write_record([
            s.unit.meeting.to_string(),
            s.unit.kind.to_string(),
            s.unit.granularity.to_string(),
            s.unit.key.clone(),
            s.label.name().to_string(),
            format_score(s.label.score()),
            s.cached.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a scored-unit CSV back. Unit text and model id are not part of the
/// CSV and come back empty; downstream aggregation needs neither.
pub fn read_scored_csv<R: Read>(reader: R) -> Result<Vec<ScoredUnit>, ClassifyError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for (row_no, record) in csv_reader.records().enumerate() {
        let record = record.map_err(|err| ClassifyError::BadCsvRow {
            line: row_no + 2,
            message: err.to_string(),
        })?;
        let field = |i: usize| -> Result<&str, ClassifyError> {
            record.get(i).ok_or(ClassifyError::BadCsvRow {
                line: row_no + 2,
                message: format!("missing column {i}"),
            })
        };
        let meeting = MeetingId::parse(field(0)?).map_err(|err| ClassifyError::BadCsvRow {
            line: row_no + 2,
            message: err.to_string(),
        })?;
        let kind = DocumentKind::parse(field(1)?).map_err(|err| ClassifyError::BadCsvRow {
            line: row_no + 2,
            message: err.to_string(),
        })?;
        let granularity =
            Granularity::parse(field(2)?).ok_or_else(|| ClassifyError::BadCsvRow {
                line: row_no + 2,
                message: format!("unknown granularity `{}`", record.get(2).unwrap_or("")),
            })?;
        let key = field(3)?.to_string();
        let label = Label::parse_name(field(4)?).ok_or_else(|| ClassifyError::BadCsvRow {
            line: row_no + 2,
            message: format!("unknown category `{}`", record.get(4).unwrap_or("")),
        })?;
        let cached = field(6)? == "true";
        out.push(ScoredUnit {
            unit: Unit {
                meeting,
                kind,
                granularity,
                key,
                text: String::new(),
            },
            label,
            model_id: String::new(),
            cached,
        });
    }
    Ok(out)
}

fn format_score(score: f64) -> String {
    // -1, -0.5, 0, 0.5, 1 — no trailing zeros, stable across platforms.
    if score == score.trunc() {
        format!("{}", score as i64)
    } else {
        format!("{score}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Mutex;

    fn unit(key: &str, text: &str) -> Unit {
        Unit {
            meeting: MeetingId::parse("20160127").unwrap(),
            kind: DocumentKind::Statement,
            granularity: Granularity::Sentence,
            key: key.into(),
            text: text.into(),
        }
    }

    fn temp_cache() -> (tempfile::TempDir, Cache) {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(&dir.path().join("cache.jsonl")).unwrap();
        (dir, cache)
    }

    fn fast_opts() -> ClassifyOptions {
        ClassifyOptions {
            backoff: Duration::from_millis(1),
            ..ClassifyOptions::default()
        }
    }

    /// Scripted backend: replies from a fixed list keyed by unit text found
    /// in the prompt, recording every call.
    struct ScriptedBackend {
        replies: Vec<(&'static str, &'static str)>,
        calls: Mutex<Vec<String>>,
    }

    impl ScriptedBackend {
        fn new(replies: Vec<(&'static str, &'static str)>) -> Self {
            ScriptedBackend {
                replies,
                calls: Mutex::new(Vec::new()),
            }
        }
    }

    impl ClassifierBackend for ScriptedBackend {
        fn model_id(&self) -> &str {
            "scripted"
        }

        fn complete(&self, prompt: &str) -> Result<String, BackendError> {
            self.calls.lock().unwrap().push(prompt.to_string());
            for (needle, reply) in &self.replies {
                if prompt.contains(needle) {
                    return Ok(reply.to_string());
                }
            }
            Err(BackendError::Malformed {
                message: "no scripted reply".into(),
            })
        }
    }

    #[test]
    fn mock_batch_is_deterministic_and_cached() {
        let units = vec![
            unit(
                "0",
                "We should tighten policy; inflation pressures are building.",
            ),
            unit("1", "No relevant terms here."),
            unit("2", "Further stimulus is warranted."),
        ];
        let (_dir, cache) = temp_cache();
        let backend = MockBackend::new();

        let first = classify_units(&units, &backend, &cache, &[], &fast_opts()).unwrap();
        assert_eq!(first.scored.len(), 3);
        assert_eq!(first.errors.len(), 0);
        assert_eq!(first.backend_calls, 3);
        assert_eq!(first.cache_hits, 0);
        let labels: Vec<Label> = first.scored.iter().map(|s| s.label).collect();
        assert_eq!(
            labels,
            vec![Label::Hawkish, Label::Neutral, Label::MostlyDovish]
        );
        assert!(first.scored.iter().all(|s| !s.cached));

        let second = classify_units(&units, &backend, &cache, &[], &fast_opts()).unwrap();
        assert_eq!(second.backend_calls, 0);
        assert_eq!(second.cache_hits, 3);
        assert!(second.scored.iter().all(|s| s.cached));
        let relabels: Vec<Label> = second.scored.iter().map(|s| s.label).collect();
        assert_eq!(labels, relabels);
    }

    #[test]
    fn batch_preserves_input_order_under_parallelism() {
        let units: Vec<Unit> = (0..40)
            .map(|i| {
                let text = if i % 2 == 0 { "a hike" } else { "a cut" };
                unit(&i.to_string(), text)
            })
            .collect();
        let (_dir, cache) = temp_cache();
        let opts = ClassifyOptions {
            parallelism: 8,
            ..fast_opts()
        };
        let outcome = classify_units(&units, &MockBackend::new(), &cache, &[], &opts).unwrap();
        assert_eq!(outcome.scored.len(), 40);
        for (i, scored) in outcome.scored.iter().enumerate() {
            assert_eq!(scored.unit.key, i.to_string());
            let expected = if i % 2 == 0 {
                Label::MostlyHawkish
            } else {
                Label::MostlyDovish
            };
            assert_eq!(scored.label, expected);
        }
    }

    #[test]
    fn garbage_reply_becomes_per_unit_error() {
        let units = vec![unit("0", "alpha"), unit("1", "beta"), unit("2", "gamma")];
        let backend = ScriptedBackend::new(vec![
            ("alpha", "Hawkish"),
            ("beta", "I cannot determine this."),
            ("gamma", "Dovish"),
        ]);
        let (_dir, cache) = temp_cache();
        let opts = ClassifyOptions {
            retries: 0,
            parallelism: 1,
            ..fast_opts()
        };
        let outcome = classify_units(&units, &backend, &cache, &[], &opts).unwrap();
        assert_eq!(outcome.scored.len(), 2);
        assert_eq!(outcome.errors.len(), 1);
        assert_eq!(outcome.errors[0].unit.key, "1");
        assert!(matches!(
            outcome.errors[0].error,
            ClassifyError::Label { .. }
        ));
        let keys: Vec<&str> = outcome.scored.iter().map(|s| s.unit.key.as_str()).collect();
        assert_eq!(keys, vec!["0", "2"]);
    }

    #[test]
    fn transport_errors_are_retried() {
        struct FailsTwice {
            remaining_failures: Mutex<u32>,
        }
        impl ClassifierBackend for FailsTwice {
            fn model_id(&self) -> &str {
                "flaky"
            }
            fn complete(&self, _prompt: &str) -> Result<String, BackendError> {
                let mut remaining = self.remaining_failures.lock().unwrap();
                if *remaining > 0 {
                    *remaining -= 1;
                    return Err(BackendError::Transport {
                        url: "test".into(),
                        message: "connection reset".into(),
                    });
                }
                Ok("Neutral".into())
            }
        }

        let backend = FailsTwice {
            remaining_failures: Mutex::new(2),
        };
        let (_dir, cache) = temp_cache();
        let opts = ClassifyOptions {
            retries: 2,
            parallelism: 1,
            ..fast_opts()
        };
        let outcome = classify_units(&[unit("0", "x")], &backend, &cache, &[], &opts).unwrap();
        assert_eq!(outcome.scored.len(), 1);
        assert_eq!(outcome.scored[0].label, Label::Neutral);
        assert_eq!(outcome.backend_calls, 3);
    }

    #[test]
    fn exhausted_retries_surface_transport_error() {
        struct AlwaysDown;
        impl ClassifierBackend for AlwaysDown {
            fn model_id(&self) -> &str {
                "down"
            }
            fn complete(&self, _prompt: &str) -> Result<String, BackendError> {
                Err(BackendError::Status {
                    url: "test".into(),
                    status: 503,
                })
            }
        }
        let (_dir, cache) = temp_cache();
        let opts = ClassifyOptions {
            retries: 1,
            parallelism: 1,
            ..fast_opts()
        };
        let outcome = classify_units(&[unit("0", "x")], &AlwaysDown, &cache, &[], &opts).unwrap();
        assert!(outcome.scored.is_empty());
        assert_eq!(outcome.errors.len(), 1);
        assert!(matches!(
            outcome.errors[0].error,
            ClassifyError::Transport { attempts: 2, .. }
        ));
    }

    #[test]
    fn few_shot_changes_cache_key_but_not_mock_label() {
        let units = vec![unit("0", "Growth is weak.")];
        let (_dir, cache) = temp_cache();
        let backend = MockBackend::new();
        let zero_shot = classify_units(&units, &backend, &cache, &[], &fast_opts()).unwrap();
        let examples = vec![FewShotExample {
            text: "Rates were raised.".into(),
            label: Label::Hawkish,
        }];
        let few_shot = classify_units(&units, &backend, &cache, &examples, &fast_opts()).unwrap();
        // Different prompt, so the warm cache is not consulted...
        assert_eq!(few_shot.cache_hits, 0);
        assert_eq!(few_shot.backend_calls, 1);
        // ...but the mock still only counts the tagged input.
        assert_eq!(few_shot.scored[0].label, zero_shot.scored[0].label);
        assert_eq!(cache.len(), 2);
    }

    #[test]
    fn long_units_are_truncated_tail_first() {
        let long_text = format!("cut {}", "filler ".repeat(100));
        let units = vec![unit("0", &long_text)];
        let (_dir, cache) = temp_cache();
        let opts = ClassifyOptions {
            max_unit_chars: Some(10),
            ..fast_opts()
        };
        let outcome = classify_units(&units, &MockBackend::new(), &cache, &[], &opts).unwrap();
        // The head survives: "cut filler" keeps the dovish term.
        assert_eq!(outcome.scored[0].label, Label::MostlyDovish);
        assert_eq!(outcome.scored[0].unit.text.chars().count(), 10);
    }

    #[test]
    fn scored_csv_round_trips() {
        let scored = vec![
            ScoredUnit {
                unit: unit("0", "text a"),
                label: Label::MostlyHawkish,
                model_id: MOCK_MODEL_ID.into(),
                cached: false,
            },
            ScoredUnit {
                unit: Unit {
                    granularity: Granularity::Speaker,
                    key: "GREENSPAN".into(),
                    kind: DocumentKind::Transcript,
                    ..unit("x", "text b")
                },
                label: Label::Dovish,
                model_id: MOCK_MODEL_ID.into(),
                cached: true,
            },
        ];
        let mut buf = Vec::new();
        write_scored_csv(&mut buf, &scored).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("date,kind,granularity,key,category,score,cached\n"));
        assert!(text.contains("2016-01-27,statement,sentence,0,Mostly Hawkish,0.5,false"));
        assert!(text.contains("2016-01-27,transcript,speaker,GREENSPAN,Dovish,-1,true"));

        let back = read_scored_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].label, Label::MostlyHawkish);
        assert_eq!(back[0].unit.key, "0");
        assert_eq!(back[1].unit.granularity, Granularity::Speaker);
        assert!(back[1].cached);
    }

    #[test]
    fn few_shot_file_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("shots.jsonl");
        std::fs::write(
            &path,
            "{\"text\": \"Rates rose.\", \"label\": \"Mostly Hawkish\"}\n\n{\"text\": \"Cuts loom.\", \"label\": \"Dovish\"}\n",
        )
        .unwrap();
        let examples = load_few_shot(&path).unwrap();
        assert_eq!(examples.len(), 2);
        assert_eq!(examples[0].label, Label::MostlyHawkish);
        assert_eq!(examples[1].text, "Cuts loom.");

        std::fs::write(&path, "{\"text\": \"\", \"label\": \"Dovish\"}\n").unwrap();
        assert!(load_few_shot(&path).is_err());
    }
}
