//! Loading, validating, and fetching the aligned document corpus.
//!
//! On disk a corpus is one directory per meeting, named `YYYYMMDD` (the
//! meeting's final day), holding up to three files: `statement.txt`,
//! `minutes.txt`, `transcript.txt`. Text is normalized to UTF-8 with Unix
//! line endings at load time; nothing else is touched.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// A meeting, identified by the calendar date of its final day.
///
/// Ordering is chronological.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeetingId(NaiveDate);

impl MeetingId {
    pub fn new(date: NaiveDate) -> Self {
        MeetingId(date)
    }

    /// Parses `YYYYMMDD` or `YYYY-MM-DD`. Exactly those shapes; chrono alone
    /// would accept shorter digit runs.
    pub fn parse(s: &str) -> Result<Self, CorpusError> {
        let bad = || CorpusError::BadDate {
            value: s.to_string(),
        };
        let parsed = match s.len() {
            8 if s.bytes().all(|b| b.is_ascii_digit()) => {
                NaiveDate::parse_from_str(s, "%Y%m%d").map_err(|_| bad())?
            }
            10 => NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        Ok(MeetingId(parsed))
    }

    pub fn date(&self) -> NaiveDate {
        self.0
    }

    /// Directory name in the corpus layout (`YYYYMMDD`).
    pub fn dir_name(&self) -> String {
        self.0.format("%Y%m%d").to_string()
    }
}

impl fmt::Display for MeetingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%d"))
    }
}

impl FromStr for MeetingId {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MeetingId::parse(s)
    }
}

/// The three document types released for each meeting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentKind {
    Statement,
    Minutes,
    Transcript,
}

impl DocumentKind {
    pub const ALL: [DocumentKind; 3] = [
        DocumentKind::Statement,
        DocumentKind::Minutes,
        DocumentKind::Transcript,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DocumentKind::Statement => "statement",
            DocumentKind::Minutes => "minutes",
            DocumentKind::Transcript => "transcript",
        }
    }

    /// File name within a meeting directory.
    pub fn file_name(&self) -> &'static str {
        match self {
            DocumentKind::Statement => "statement.txt",
            DocumentKind::Minutes => "minutes.txt",
            DocumentKind::Transcript => "transcript.txt",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CorpusError> {
        match s.to_ascii_lowercase().as_str() {
            "statement" => Ok(DocumentKind::Statement),
            "minutes" => Ok(DocumentKind::Minutes),
            "transcript" => Ok(DocumentKind::Transcript),
            _ => Err(CorpusError::BadKind {
                value: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DocumentKind {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DocumentKind::parse(s)
    }
}

/// One document of one meeting, as loaded from disk or fetched remotely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDocument {
    pub meeting: MeetingId,
    pub kind: DocumentKind,
    /// Full document text, UTF-8 with Unix line endings. Never empty.
    pub text: String,
    /// Provenance: the file path or URL the text came from.
    pub source: String,
}

/// An immutable collection of aligned documents, sorted by (date, kind).
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    documents: Vec<RawDocument>,
}

impl Corpus {
    /// Builds a corpus from documents, enforcing (meeting, kind) uniqueness
    /// and non-empty text.
    pub fn from_documents(mut documents: Vec<RawDocument>) -> Result<Self, CorpusError> {
        documents.sort_by_key(|d| (d.meeting, d.kind));
        for pair in documents.windows(2) {
            if pair[0].meeting == pair[1].meeting && pair[0].kind == pair[1].kind {
                return Err(CorpusError::DuplicateDocument {
                    meeting: pair[0].meeting,
                    kind: pair[0].kind,
                    first: pair[0].source.clone(),
                    second: pair[1].source.clone(),
                });
            }
        }
        for doc in &documents {
            if doc.text.trim().is_empty() {
                return Err(CorpusError::EmptyDocument {
                    path: PathBuf::from(&doc.source),
                });
            }
        }
        Ok(Corpus { documents })
    }

    pub fn documents(&self) -> &[RawDocument] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// (earliest, latest) meeting, or `None` for an empty corpus.
    pub fn span(&self) -> Option<(MeetingId, MeetingId)> {
        let first = self.documents.first()?;
        let last = self.documents.last()?;
        Some((first.meeting, last.meeting))
    }

    /// All distinct meetings, chronological.
    pub fn meetings(&self) -> Vec<MeetingId> {
        let mut out: Vec<MeetingId> = self.documents.iter().map(|d| d.meeting).collect();
        out.dedup();
        out
    }

    pub fn get(&self, meeting: MeetingId, kind: DocumentKind) -> Option<&RawDocument> {
        self.documents
            .binary_search_by_key(&(meeting, kind), |d| (d.meeting, d.kind))
            .ok()
            .map(|idx| &self.documents[idx])
    }

    /// Manifest entries (date, kind, sha256, byte length) for every document.
    pub fn manifest(&self) -> Vec<ManifestEntry> {
        self.documents
            .iter()
            .map(|d| ManifestEntry {
                date: d.meeting,
                kind: d.kind,
                sha256: sha256_hex(d.text.as_bytes()),
                bytes: d.text.len() as u64,
            })
            .collect()
    }
}

/// One line of `manifest.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub date: MeetingId,
    pub kind: DocumentKind,
    pub sha256: String,
    pub bytes: u64,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// How serious a missing document is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// Expected gap (statements before 2000 were provided inconsistently).
    Info,
    /// Unexpected gap that degrades the analysis.
    Warn,
}

/// A missing document flagged by [`validate_alignment`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignmentFlag {
    pub meeting: MeetingId,
    pub missing: DocumentKind,
    pub severity: Severity,
}

/// Per-meeting presence of the three document kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeetingAlignment {
    pub meeting: MeetingId,
    pub present: Vec<DocumentKind>,
}

/// Output of [`validate_alignment`]: never an error, only flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignmentReport {
    pub meetings: Vec<MeetingAlignment>,
    pub flags: Vec<AlignmentFlag>,
}

impl AlignmentReport {
    pub fn is_fully_aligned(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn warn_count(&self) -> usize {
        self.flags
            .iter()
            .filter(|f| f.severity == Severity::Warn)
            .count()
    }

    pub fn info_count(&self) -> usize {
        self.flags
            .iter()
            .filter(|f| f.severity == Severity::Info)
            .count()
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid meeting date `{value}` (expected YYYYMMDD or YYYY-MM-DD)")]
    BadDate { value: String },
    #[error("unknown document kind `{value}`")]
    BadKind { value: String },
    #[error("directory {path} is not named after a meeting date (expected YYYYMMDD)")]
    BadMeetingDir { path: PathBuf },
    #[error("duplicate document for {meeting} {kind}: {first} and {second}")]
    DuplicateDocument {
        meeting: MeetingId,
        kind: DocumentKind,
        first: String,
        second: String,
    },
    #[error("document {path} is empty")]
    EmptyDocument { path: PathBuf },
    #[error("GET {url} returned status {status}")]
    HttpStatus { url: String, status: u16 },
    #[error("GET {url} failed: {message}")]
    Http { url: String, message: String },
    #[error("GET {url} returned an empty body")]
    EmptyBody { url: String },
}

/// Normalizes raw bytes to UTF-8 text with Unix line endings.
fn normalize_text(bytes: &[u8]) -> String {
    let text = String::from_utf8_lossy(bytes);
    let text = text.replace("\r\n", "\n");
    text.replace('\r', "\n")
}

/// Loads every well-formed document under `root`.
///
/// Expects one `YYYYMMDD` directory per meeting; files other than the three
/// known names are ignored. Two directory names resolving to the same date
/// (`20160127` and `2016-01-27`) make their documents duplicates.
pub fn load_corpus(root: &Path) -> Result<Corpus, CorpusError> {
    let entries = fs::read_dir(root).map_err(|source| CorpusError::Io {
        path: root.to_path_buf(),
        source,
    })?;

    let mut dirs: Vec<(MeetingId, PathBuf)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| CorpusError::Io {
            path: root.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        if !path.is_dir() {
            continue;
        }
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if name.starts_with('.') {
            continue;
        }
        let meeting = MeetingId::parse(&name)
            .map_err(|_| CorpusError::BadMeetingDir { path: path.clone() })?;
        dirs.push((meeting, path));
    }
    dirs.sort_by_key(|(meeting, _)| *meeting);

    let mut seen: BTreeMap<(MeetingId, DocumentKind), PathBuf> = BTreeMap::new();
    let mut documents = Vec::new();
    for (meeting, dir) in dirs {
        for kind in DocumentKind::ALL {
            let path = dir.join(kind.file_name());
            if !path.is_file() {
                continue;
            }
            if let Some(first) = seen.get(&(meeting, kind)) {
                return Err(CorpusError::DuplicateDocument {
                    meeting,
                    kind,
                    first: first.display().to_string(),
                    second: path.display().to_string(),
                });
            }
            let bytes = fs::read(&path).map_err(|source| CorpusError::Io {
                path: path.clone(),
                source,
            })?;
            let text = normalize_text(&bytes);
            if text.trim().is_empty() {
                return Err(CorpusError::EmptyDocument { path });
            }
            seen.insert((meeting, kind), path.clone());
            documents.push(RawDocument {
                meeting,
                kind,
                text,
                source: path.display().to_string(),
            });
        }
    }

    Corpus::from_documents(documents)
}

/// Writes a corpus back out in the standard layout. Inverse of [`load_corpus`].
pub fn write_corpus(corpus: &Corpus, root: &Path) -> Result<(), CorpusError> {
    for doc in corpus.documents() {
        let dir = root.join(doc.meeting.dir_name());
        fs::create_dir_all(&dir).map_err(|source| CorpusError::Io {
            path: dir.clone(),
            source,
        })?;
        let path = dir.join(doc.kind.file_name());
        fs::write(&path, &doc.text).map_err(|source| CorpusError::Io { path, source })?;
    }
    Ok(())
}

/// Reports which document kinds are present and missing per meeting.
///
/// Missing transcripts are WARN (the analysis leans on them); missing
/// statements and minutes are INFO (gaps are expected in the early years).
pub fn validate_alignment(corpus: &Corpus) -> AlignmentReport {
    let mut meetings = Vec::new();
    let mut flags = Vec::new();
    for meeting in corpus.meetings() {
        let present: Vec<DocumentKind> = DocumentKind::ALL
            .into_iter()
            .filter(|kind| corpus.get(meeting, *kind).is_some())
            .collect();
        for kind in DocumentKind::ALL {
            if !present.contains(&kind) {
                let severity = match kind {
                    DocumentKind::Transcript => Severity::Warn,
                    DocumentKind::Statement | DocumentKind::Minutes => Severity::Info,
                };
                flags.push(AlignmentFlag {
                    meeting,
                    missing: kind,
                    severity,
                });
            }
        }
        meetings.push(MeetingAlignment { meeting, present });
    }
    AlignmentReport { meetings, flags }
}

/// Fetches one document over HTTP and stores it into the corpus layout.
///
/// The URL is `{base_url}/{YYYYMMDD}/{kind}.txt`. Re-fetching overwrites the
/// same path with identical content, so the operation is idempotent.
pub fn fetch_remote(
    root: &Path,
    meeting: MeetingId,
    kind: DocumentKind,
    base_url: &str,
) -> Result<RawDocument, CorpusError> {
    let url = format!(
        "{}/{}/{}",
        base_url.trim_end_matches('/'),
        meeting.dir_name(),
        kind.file_name()
    );
    let mut response = ureq::get(&url).call().map_err(|err| match err {
        ureq::Error::StatusCode(status) => CorpusError::HttpStatus {
            url: url.clone(),
            status,
        },
        other => CorpusError::Http {
            url: url.clone(),
            message: other.to_string(),
        },
    })?;
    let body = response
        .body_mut()
        .read_to_string()
        .map_err(|err| CorpusError::Http {
            url: url.clone(),
            message: err.to_string(),
        })?;
    let text = normalize_text(body.as_bytes());
    if text.trim().is_empty() {
        return Err(CorpusError::EmptyBody { url });
    }

    let dir = root.join(meeting.dir_name());
    fs::create_dir_all(&dir).map_err(|source| CorpusError::Io {
        path: dir.clone(),
        source,
    })?;
    let path = dir.join(kind.file_name());
    fs::write(&path, &text).map_err(|source| CorpusError::Io {
        path: path.clone(),
        source,
    })?;

    Ok(RawDocument {
        meeting,
        kind,
        text,
        source: url,
    })
}
