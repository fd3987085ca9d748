//! Prompt construction and response parsing.

use std::sync::LazyLock;

use regex::Regex;
use thiserror::Error;

use super::label::Label;
use super::{FewShotExample, Unit};

/// The classification prompt template. `INPUT` is replaced by the unit text;
/// every occurrence of `statement` is swapped for the document word when
/// classifying minutes or transcripts.
pub const PROMPT_TEMPLATE: &str = "<statement>
INPUT
</statement>
<labels>
Dovish: Strongly expresses a belief that the economy may be growing too slowly and may need stimulus through monetary policy.
Mostly dovish: Overall message expresses a belief that the economy may be growing too slowly and may need stimulus through monetary policy.
Neutral: Expresses neither a hawkish nor dovish view and is mostly objective.
Mostly hawkish: Overall message expresses a belief that the economy is growing too quickly and may need to be slowed down through monetary policy.
Hawkish: Strongly expresses a belief that the economy is growing too quickly and may need to be slowed down through monetary policy.
</labels>
Which label best applies applies to the statement (Dovish, Mostly Dovish, Neutral, Mostly Hawkish, Hawkish)?
";

/// Renders the prompt for a unit: few-shot text/label pairs (if any), then
/// the template with the document word substituted and the unit text between
/// the tags.
pub fn build_prompt(unit: &Unit, few_shot: &[FewShotExample], doc_word: &str) -> String {
    let mut prompt = String::new();
    for example in few_shot {
        prompt.push_str("Text: ");
        prompt.push_str(&example.text);
        prompt.push_str("\nLabel: ");
        prompt.push_str(example.label.name());
        prompt.push_str("\n\n");
    }
    let body = PROMPT_TEMPLATE.replace("statement", doc_word);
    prompt.push_str(&body.replacen("INPUT", &unit.text, 1));
    prompt
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LabelParseError {
    #[error("no label found in response: {raw:?}")]
    NoMatch { raw: String },
    #[error("ambiguous label in response: {raw:?}")]
    Ambiguous { raw: String },
}

static LABEL_PATTERNS: LazyLock<Vec<(Label, Regex)>> = LazyLock::new(|| {
    Label::ALL
        .into_iter()
        .map(|label| {
            let words = label
                .name()
                .split(' ')
                .map(regex::escape)
                .collect::<Vec<_>>()
                .join(r"[\s-]+");
            let pattern = Regex::new(&format!(r"(?i)\b{words}\b")).expect("label pattern");
            (label, pattern)
        })
        .collect()
});

/// Extracts a label from raw classifier output.
///
/// Case-insensitive substring search over the five category names, with the
/// longest match winning, so `Mostly Hawkish` beats the `Hawkish` embedded in
/// it. No match or a tie between equally long matches of different
/// categories is an error carrying the raw text.
pub fn parse_label(raw: &str) -> Result<Label, LabelParseError> {
    let mut matches: Vec<(Label, usize, usize)> = Vec::new();
    for (label, pattern) in LABEL_PATTERNS.iter() {
        for m in pattern.find_iter(raw) {
            matches.push((*label, m.start(), m.end()));
        }
    }
    // Drop matches contained in a longer match (`Hawkish` inside `Mostly
    // Hawkish`).
    let contained: Vec<bool> = matches
        .iter()
        .map(|&(_, start, end)| {
            matches.iter().any(|&(_, ostart, oend)| {
                (oend - ostart) > (end - start) && ostart <= start && end <= oend
            })
        })
        .collect();
    let survivors: Vec<(Label, usize)> = matches
        .iter()
        .zip(&contained)
        .filter(|(_, is_contained)| !**is_contained)
        .map(|(&(label, start, end), _)| (label, end - start))
        .collect();

    if survivors.is_empty() {
        return Err(LabelParseError::NoMatch {
            raw: raw.to_string(),
        });
    }
    let longest = survivors
        .iter()
        .map(|&(_, len)| len)
        .max()
        .expect("nonempty");
    let mut winners: Vec<Label> = survivors
        .iter()
        .filter(|&&(_, len)| len == longest)
        .map(|&(label, _)| label)
        .collect();
    winners.dedup();
    winners.sort_by_key(|l| l.index());
    winners.dedup();
    if winners.len() == 1 {
        Ok(winners[0])
    } else {
        Err(LabelParseError::Ambiguous {
            raw: raw.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Granularity;
    use crate::corpus::{DocumentKind, MeetingId};

    fn unit(text: &str, kind: DocumentKind) -> Unit {
        Unit {
            meeting: MeetingId::parse("20160127").unwrap(),
            kind,
            granularity: Granularity::Sentence,
            key: "0".into(),
            text: text.into(),
        }
    }

    #[test]
    fn prompt_wraps_input_in_tags() {
        let prompt = build_prompt(
            &unit("Inflation is low.", DocumentKind::Statement),
            &[],
            "statement",
        );
        assert!(prompt.contains("<statement>\nInflation is low.\n</statement>"));
        assert!(prompt.contains("Which label best applies applies to the statement"));
        assert!(prompt.ends_with("(Dovish, Mostly Dovish, Neutral, Mostly Hawkish, Hawkish)?\n"));
    }

    #[test]
    fn prompt_swaps_document_word() {
        let prompt = build_prompt(&unit("Text.", DocumentKind::Transcript), &[], "transcript");
        assert!(prompt.contains("<transcript>\nText.\n</transcript>"));
        assert!(prompt.contains("applies to the transcript"));
        assert!(!prompt.contains("statement"));
    }

    #[test]
    fn few_shot_pairs_precede_template() {
        let examples: Vec<FewShotExample> = (0..10)
            .map(|i| FewShotExample {
                text: format!("Example {i}."),
                label: Label::ALL[i % 5],
            })
            .collect();
        let prompt = build_prompt(
            &unit("Input.", DocumentKind::Statement),
            &examples,
            "statement",
        );
        assert_eq!(prompt.matches("Text: ").count(), 10);
        assert_eq!(prompt.matches("Label: ").count(), 10);
        let template_at = prompt.find("<statement>").unwrap();
        let last_example = prompt.rfind("Label: ").unwrap();
        assert!(last_example < template_at);
    }

    #[test]
    fn empty_unit_text_is_permitted() {
        let prompt = build_prompt(&unit("", DocumentKind::Statement), &[], "statement");
        assert!(prompt.contains("<statement>\n\n</statement>"));
    }

    #[test]
    fn parses_exact_names() {
        assert_eq!(parse_label("Mostly Hawkish"), Ok(Label::MostlyHawkish));
        assert_eq!(parse_label("Neutral"), Ok(Label::Neutral));
    }

    #[test]
    fn parses_labels_inside_prose() {
        assert_eq!(
            parse_label("the label is: mostly dovish."),
            Ok(Label::MostlyDovish)
        );
        assert_eq!(
            parse_label("I'd call this Hawkish overall"),
            Ok(Label::Hawkish)
        );
    }

    #[test]
    fn longest_match_wins() {
        // Both "Mostly Hawkish" and its embedded "Hawkish" appear; the longer
        // category must win.
        assert_eq!(
            parse_label("Answer: MOSTLY HAWKISH"),
            Ok(Label::MostlyHawkish)
        );
        assert_eq!(parse_label("mostly-dovish"), Ok(Label::MostlyDovish));
    }

    #[test]
    fn unparseable_and_ambiguous_are_errors() {
        assert!(matches!(
            parse_label("I cannot determine this."),
            Err(LabelParseError::NoMatch { .. })
        ));
        // "hawkish" and "neutral" are equally long, so neither wins.
        assert!(matches!(
            parse_label("either hawkish or neutral"),
            Err(LabelParseError::Ambiguous { .. })
        ));
    }

    #[test]
    fn unequal_lengths_break_ties() {
        // Longest match wins even across categories.
        assert_eq!(parse_label("hawkish, not dovish"), Ok(Label::Hawkish));
        assert_eq!(
            parse_label("mostly dovish rather than dovish"),
            Ok(Label::MostlyDovish)
        );
    }

    #[test]
    fn round_trips_every_category_name_in_any_case() {
        for label in Label::ALL {
            for rendered in [
                label.name().to_string(),
                label.name().to_uppercase(),
                label.name().to_lowercase(),
            ] {
                assert_eq!(
                    parse_label(&rendered),
                    Ok(label),
                    "case variant {rendered:?}"
                );
            }
        }
    }

    #[test]
    fn repeated_same_label_is_not_ambiguous() {
        assert_eq!(
            parse_label("Hawkish. Definitely hawkish."),
            Ok(Label::Hawkish)
        );
    }
}
