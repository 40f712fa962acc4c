//! Word overlap between candidate groupings proposed for a game's topics.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::scalar::Scalar;
use crate::text::{normalize_word, topic_key};

/// Words proposed for one topic when assignment with replacement is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProposalEntry {
    pub topic: String,
    pub words: Vec<String>,
}

/// Candidate proposals for every topic of a game.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposals {
    pub entries: Vec<ProposalEntry>,
    /// Proposed words that were not in the game's pool and were discarded.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dropped_words: Vec<String>,
}

impl Proposals {
    pub fn new(entries: impl IntoIterator<Item = (String, Vec<String>)>) -> Self {
        Self {
            entries: entries.into_iter().map(|(topic, words)| ProposalEntry { topic, words }).collect(),
            dropped_words: Vec::new(),
        }
    }

    /// Finds the entry for a topic, ignoring case.
    pub fn get(&self, topic: &str) -> Option<&ProposalEntry> {
        let key = topic_key(topic);
        self.entries.iter().find(|e| topic_key(&e.topic) == key)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapMode {
    /// Per topic, the number of its words proposed for any other topic,
    /// averaged over topics.
    #[default]
    PerTopic,
    /// Mean size of the intersection over unordered topic pairs.
    Pairwise,
}

/// Average word overlap across the proposals for `topics`.
pub fn word_overlap<F: Scalar>(proposals: &Proposals, topics: &[&str], mode: OverlapMode) -> Result<F, AnalysisError> {
    let sets: Vec<HashSet<String>> = topics
        .iter()
        .map(|t| {
            proposals
                .get(t)
                .map(|e| e.words.iter().map(|w| normalize_word(w)).collect())
                .ok_or_else(|| AnalysisError::MissingTopic(t.to_string()))
        })
        .collect::<Result<_, _>>()?;
    if sets.is_empty() {
        return Ok(F::zero());
    }
    match mode {
        OverlapMode::PerTopic => {
            let total: usize = (0..sets.len())
                .map(|t| {
                    sets[t]
                        .iter()
                        .filter(|w| sets.iter().enumerate().any(|(s, set)| s != t && set.contains(*w)))
                        .count()
                })
                .sum();
            Ok(F::from_count(total) / F::from_count(sets.len()))
        }
        OverlapMode::Pairwise => {
            let mut total = 0usize;
            let mut count = 0usize;
            for i in 0..sets.len() {
                for j in i + 1..sets.len() {
                    total += sets[i].intersection(&sets[j]).count();
                    count += 1;
                }
            }
            if count == 0 {
                return Ok(F::zero());
            }
            Ok(F::from_count(total) / F::from_count(count))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(entries: &[(&str, &[&str])]) -> Proposals {
        Proposals::new(entries.iter().map(|(t, ws)| (t.to_string(), ws.iter().map(|w| w.to_string()).collect())))
    }

    #[test]
    fn disjoint_is_zero() {
        let props = p(&[("A", &["a", "b"]), ("B", &["c", "d"])]);
        assert_eq!(word_overlap::<f64>(&props, &["A", "B"], OverlapMode::PerTopic).unwrap(), 0.0);
        assert_eq!(word_overlap::<f64>(&props, &["A", "B"], OverlapMode::Pairwise).unwrap(), 0.0);
    }

    #[test]
    fn identical_proposals_full_overlap() {
        let ws: &[&str] = &["a", "b", "c", "d"];
        let props = p(&[("A", ws), ("B", ws), ("C", ws), ("D", ws)]);
        assert_eq!(word_overlap::<f64>(&props, &["A", "B", "C", "D"], OverlapMode::PerTopic).unwrap(), 4.0);
    }

    #[test]
    fn missing_topic() {
        let props = p(&[("A", &["a"])]);
        assert_eq!(
            word_overlap::<f64>(&props, &["A", "B"], OverlapMode::PerTopic).unwrap_err(),
            AnalysisError::MissingTopic("B".into())
        );
    }

    #[test]
    fn topic_lookup_ignores_case() {
        let props = p(&[("NBA TEAMS", &["Heat"])]);
        assert!(props.get("NBA Teams").is_some());
    }
}
