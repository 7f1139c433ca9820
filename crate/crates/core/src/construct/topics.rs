//! Prompt templates, response parsing and topic-key normalization shared by
//! the LLM-based constructors.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::Value;

use crate::error::Result;
use crate::hot::{NodeId, TextHypergraph};
use crate::provider::ChatMessage;

pub const PROMPT_VERSION: &str = "v1";

const SYSTEM: &str = "You are a careful annotator who names the topics discussed in news \
text. Answer with a JSON array of short topic strings and nothing else.";

const DOCUMENT_INSTRUCTION: &str = "List the 3-7 main topics of the following document. \
Each topic should be a short noun phrase. Respond only with a JSON array of strings, for \
example [\"topic one\", \"topic two\"].";

const SENTENCE_INSTRUCTION: &str = "List the topics of this sentence. Each topic should be \
a short noun phrase. Respond only with a JSON array of strings, for example \
[\"topic one\"].";

const PAIR_INSTRUCTION: &str = "Name the single common topic shared by the two sentences \
below, as a short noun phrase. Respond only with a JSON array containing exactly one \
string, for example [\"common topic\"].";

const TEXT_MARKER: &str = "\n\nText:\n";
const FIRST_MARKER: &str = "\n\nSentence 1:\n";
const SECOND_MARKER: &str = "\n\nSentence 2:\n";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Document,
    Sentence,
}

pub fn unit_prompt(level: Level, text: &str) -> Vec<ChatMessage> {
    let instruction = match level {
        Level::Document => DOCUMENT_INSTRUCTION,
        Level::Sentence => SENTENCE_INSTRUCTION,
    };
    vec![
        ChatMessage::system(SYSTEM),
        ChatMessage::user(format!("{instruction}{TEXT_MARKER}{text}")),
    ]
}

pub fn pair_prompt(first: &str, second: &str) -> Vec<ChatMessage> {
    vec![
        ChatMessage::system(SYSTEM),
        ChatMessage::user(format!(
            "{PAIR_INSTRUCTION}{FIRST_MARKER}{first}{SECOND_MARKER}{second}"
        )),
    ]
}

/// Recovers the unit text from a prompt built by [`unit_prompt`].
pub fn split_unit_prompt(prompt: &str) -> Option<&str> {
    prompt.split_once(TEXT_MARKER).map(|(_, t)| t)
}

/// Recovers both sentences from a prompt built by [`pair_prompt`].
pub fn split_pair_prompt(prompt: &str) -> Option<(&str, &str)> {
    let (_, rest) = prompt.split_once(FIRST_MARKER)?;
    rest.split_once(SECOND_MARKER)
}

/// Canonical merge key for a topic: trimmed, lowercased, internal
/// whitespace collapsed, surrounding punctuation stripped. `None` when
/// nothing is left.
pub fn normalize_topic(raw: &str) -> Option<String> {
    let lowered = raw.to_lowercase();
    let collapsed = lowered.split_whitespace().collect::<Vec<_>>().join(" ");
    let key = collapsed.trim_matches(|c: char| !c.is_alphanumeric());
    (!key.is_empty()).then(|| key.to_owned())
}

/// Parses a model response into topic strings.
///
/// A JSON array (optionally wrapped in prose or a code fence) is preferred;
/// otherwise each non-empty line is a topic with list bullets removed.
/// Returns `None` when nothing usable is found.
pub fn parse_topic_list(response: &str) -> Option<Vec<String>> {
    let trimmed = response.trim();
    if trimmed.is_empty() {
        return None;
    }
    if let (Some(open), Some(close)) = (trimmed.find('['), trimmed.rfind(']')) {
        if open < close {
            if let Ok(Value::Array(items)) = serde_json::from_str::<Value>(&trimmed[open..=close]) {
                let topics: Option<Vec<String>> = items
                    .into_iter()
                    .map(|v| match v {
                        Value::String(s) => Some(s),
                        _ => None,
                    })
                    .collect();
                if let Some(topics) = topics {
                    return Some(topics);
                }
            }
        }
    }
    let topics: Vec<String> = trimmed
        .lines()
        .map(strip_bullet)
        .filter(|l| !l.is_empty() && !l.ends_with(':') && !l.starts_with("```"))
        .map(str::to_owned)
        .collect();
    (!topics.is_empty()).then_some(topics)
}

fn strip_bullet(line: &str) -> &str {
    let l = line.trim();
    let l = l.trim_start_matches(['-', '*', '\u{2022}']).trim_start();
    let digits = l.chars().take_while(char::is_ascii_digit).count();
    if digits > 0 {
        let rest = &l[digits..];
        if let Some(r) = rest.strip_prefix('.').or_else(|| rest.strip_prefix(')')) {
            return r.trim();
        }
    }
    l
}

/// Accumulates topic keys into hyperedges: members are unioned per key and
/// the label is the most frequent surface form (ties: lexicographically
/// smallest).
#[derive(Debug, Default)]
pub(crate) struct TopicTally {
    topics: BTreeMap<String, TopicEntry>,
}

#[derive(Debug, Default)]
struct TopicEntry {
    members: BTreeSet<NodeId>,
    surfaces: BTreeMap<String, usize>,
}

impl TopicTally {
    pub fn add(&mut self, surface: &str, key: &str, members: impl IntoIterator<Item = NodeId>) {
        let entry = self.topics.entry(key.to_owned()).or_default();
        entry.members.extend(members);
        *entry.surfaces.entry(surface.trim().to_owned()).or_default() += 1;
    }

    /// Adds one hyperedge per key to `hot`, with id `topic:<key>`.
    pub fn into_hyperedges(self, hot: &mut TextHypergraph) -> Result<()> {
        for (key, entry) in self.topics {
            let label = entry
                .surfaces
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
                .map(|(s, _)| s.clone())
                .unwrap_or_else(|| key.clone());
            hot.add_hyperedge(format!("topic:{key}"), label, entry.members)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizer_rules() {
        assert_eq!(
            normalize_topic("Climate Policy").as_deref(),
            Some("climate policy")
        );
        assert_eq!(normalize_topic("EVs").as_deref(), Some("evs"));
        assert_eq!(
            normalize_topic("  \"Labor   Strikes.\" ").as_deref(),
            Some("labor strikes")
        );
        assert_eq!(normalize_topic(" -- ").as_deref(), None);
        assert_eq!(normalize_topic("").as_deref(), None);
    }

    #[test]
    fn normalizer_is_idempotent() {
        for s in ["A  b!", "(Fed) rates?", "x"] {
            let once = normalize_topic(s).unwrap();
            assert_eq!(normalize_topic(&once).unwrap(), once);
        }
    }

    #[test]
    fn parses_json_arrays() {
        assert_eq!(
            parse_topic_list(r#"["Climate Policy","EVs"]"#).unwrap(),
            ["Climate Policy", "EVs"]
        );
        assert_eq!(
            parse_topic_list("Sure! Here:\n```json\n[\"a\", \"b\"]\n```").unwrap(),
            ["a", "b"]
        );
        assert_eq!(parse_topic_list("[]").unwrap(), Vec::<String>::new());
    }

    #[test]
    fn parses_line_lists() {
        assert_eq!(
            parse_topic_list("Topics:\n- inflation\n2. Federal Reserve\n* jobs").unwrap(),
            ["inflation", "Federal Reserve", "jobs"]
        );
    }

    #[test]
    fn rejects_empty_responses() {
        assert!(parse_topic_list("   ").is_none());
        assert!(parse_topic_list("Topics:\n").is_none());
    }

    #[test]
    fn prompts_round_trip_through_markers() {
        let m = unit_prompt(Level::Document, "Body text.");
        assert_eq!(split_unit_prompt(&m[1].content), Some("Body text."));
        let p = pair_prompt("First one.", "Second one.");
        assert_eq!(
            split_pair_prompt(&p[1].content),
            Some(("First one.", "Second one."))
        );
    }

    #[test]
    fn tally_picks_most_frequent_surface() {
        let mut hot = TextHypergraph::new();
        for id in ["d1", "d2", "d3"] {
            hot.add_node(id, crate::hot::Node::new("")).unwrap();
        }
        let mut t = TopicTally::default();
        t.add("Inflation", "inflation", [NodeId::from("d1")]);
        t.add("inflation", "inflation", [NodeId::from("d2")]);
        t.add("inflation", "inflation", [NodeId::from("d3")]);
        t.into_hyperedges(&mut hot).unwrap();
        let e = hot.hyperedge("topic:inflation").unwrap();
        assert_eq!(e.label, "inflation");
        assert_eq!(e.len(), 3);
    }
}
