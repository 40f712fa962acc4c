use serde::{Deserialize, Serialize};

use crate::text::{dedup_words, normalize_word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerGroup {
    pub topic: String,
    pub words: Vec<String>,
}

/// Topic-labelled groups extracted from a model response, in response order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedAnswer {
    pub groups: Vec<AnswerGroup>,
    pub raw_text: String,
    pub was_reformatted: bool,
    /// Number of times the answer was (re)stated in the response. More than
    /// one block means the model repeated or corrected itself.
    #[serde(default = "one")]
    pub block_count: usize,
}

fn one() -> usize {
    1
}

impl ParsedAnswer {
    /// Builds an answer, dropping groups with an empty topic and
    /// deduplicating each word list in order.
    pub fn new(groups: impl IntoIterator<Item = (String, Vec<String>)>, raw_text: impl Into<String>) -> Self {
        let groups = groups
            .into_iter()
            .filter_map(|(topic, words)| {
                let topic = normalize_word(&topic);
                (!topic.is_empty()).then(|| AnswerGroup { topic, words: dedup_words(&words) })
            })
            .collect();
        Self { groups, raw_text: raw_text.into(), was_reformatted: false, block_count: 1 }
    }

    /// The answer recorded when no groups could be recovered.
    pub fn empty(raw_text: impl Into<String>) -> Self {
        Self { groups: Vec::new(), raw_text: raw_text.into(), was_reformatted: false, block_count: 0 }
    }

    pub fn is_multi_block(&self) -> bool {
        self.block_count > 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_topics_dropped_words_deduped() {
        let a = ParsedAnswer::new(
            vec![
                ("  ".to_string(), vec!["x".to_string()]),
                ("T".to_string(), vec!["a".into(), "b".into(), "a".into()]),
            ],
            "raw",
        );
        assert_eq!(a.groups, vec![AnswerGroup { topic: "T".into(), words: vec!["a".into(), "b".into()] }]);
    }
}
