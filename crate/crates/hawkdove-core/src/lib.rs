//! Quantifies hawk/dove sentiment and dissent in FOMC meeting documents.
//!
//! The pipeline runs in three stages, each backed by a module here:
//!
//! 1. [`corpus`] loads an aligned corpus of statements, minutes, and
//!    transcripts keyed by meeting date (and can fetch missing files over
//!    HTTP).
//! 2. [`textparse`] partitions transcripts into speaker turns, re-aggregates
//!    them per speaker, and segments statements into sentences.
//! 3. [`classify`] assigns each text unit one of five hawk/dove labels via a
//!    pluggable backend (an HTTP chat-completion API or a deterministic
//!    offline mock), with an append-only response cache.
//!
//! Downstream, [`score`] aggregates labelled units into per-meeting mean and
//! logit-scaled scores, [`dissent`] computes the binary dissent measure and
//! its corpus-level rates, [`eval`] compares predictions against gold labels,
//! and [`negativity`] runs the lexicon-based per-topic negativity analysis.

pub mod classify;
pub mod corpus;
pub mod dissent;
pub mod eval;
pub mod negativity;
pub mod score;
pub mod textparse;

pub use classify::{
    ClassifierBackend, ClassifyOptions, FewShotExample, Granularity, Label, ScoredUnit, Unit,
};
pub use corpus::{Corpus, DocumentKind, MeetingId, RawDocument};
pub use dissent::{DissentRecord, DissentReport};
pub use eval::{EvalReport, GoldLabel};
pub use negativity::{Lexicon, NegativityResult, TopicSpan};
pub use score::MeetingScores;
pub use textparse::{Sentence, SpeakerAggregate, SpeakerTurn};
