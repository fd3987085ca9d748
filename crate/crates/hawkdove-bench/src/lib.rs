//! Synthetic fixture generators sized for benchmarking the pipeline's hot
//! paths. Deterministic by construction so criterion runs are comparable.

use hawkdove_core::classify::{Granularity, Label, ScoredUnit, Unit};
use hawkdove_core::corpus::{DocumentKind, MeetingId, RawDocument};

const SPEAKERS: [(&str, &str); 6] = [
    ("CHAIRMAN", "GREENSPAN"),
    ("MR", "KOHN"),
    ("MS", "YELLEN"),
    ("VICE CHAIRMAN", "FERGUSON"),
    ("PRESIDENT", "MINEHAN"),
    ("GOVERNOR", "MEYER"),
];

const PHRASES: [&str; 6] = [
    "The outlook for activity has firmed since the last meeting.",
    "I would prefer to wait for more complete data before moving.",
    "Inflation pressures remain contained by most measures we track.",
    "Credit conditions continue to support household spending.",
    "The risks around the projection look roughly balanced to me.",
    "Further weakness abroad could spill into the export sector.",
];

fn meeting() -> MeetingId {
    MeetingId::parse("20080130").expect("fixture date")
}

/// A transcript with `n_turns` tagged speaker turns of varying length.
pub fn synthetic_transcript(n_turns: usize) -> RawDocument {
    let mut text = String::from("Meeting of the Federal Open Market Committee\n\n");
    for i in 0..n_turns {
        let (honorific, surname) = SPEAKERS[i % SPEAKERS.len()];
        text.push_str(honorific);
        if honorific != "CHAIRMAN" && honorific != "VICE CHAIRMAN" {
            text.push('.');
        }
        text.push(' ');
        text.push_str(surname);
        text.push_str(". ");
        for j in 0..=(i % 4) {
            text.push_str(PHRASES[(i + j) % PHRASES.len()]);
            text.push(' ');
        }
        text.push('\n');
    }
    RawDocument {
        meeting: meeting(),
        kind: DocumentKind::Transcript,
        text,
        source: "synthetic-transcript".into(),
    }
}

/// A statement of `n_sentences` plain sentences.
pub fn synthetic_statement(n_sentences: usize) -> RawDocument {
    let mut text = String::new();
    for i in 0..n_sentences {
        text.push_str(PHRASES[i % PHRASES.len()]);
        text.push(' ');
    }
    RawDocument {
        meeting: meeting(),
        kind: DocumentKind::Statement,
        text,
        source: "synthetic-statement".into(),
    }
}

/// `n` scored units cycling through the five labels across many meetings.
pub fn synthetic_scored_units(n: usize) -> Vec<ScoredUnit> {
    (0..n)
        .map(|i| {
            let year = 1994 + (i / 96) % 23;
            let month = 1 + (i / 8) % 12;
            ScoredUnit {
                unit: Unit {
                    meeting: MeetingId::parse(&format!("{year:04}-{month:02}-15")).expect("date"),
                    kind: DocumentKind::Statement,
                    granularity: Granularity::Sentence,
                    key: i.to_string(),
                    text: String::new(),
                },
                label: Label::ALL[i % 5],
                model_id: "bench".into(),
                cached: false,
            }
        })
        .collect()
}
