use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::grouping::Tag;
use crate::text::{normalize_word, topic_key};

/// Supported values for both group count and group size.
pub const SETTING_RANGE: std::ops::RangeInclusive<usize> = 2..=4;

/// The nine group-count by group-size settings.
pub fn all_settings() -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(9);
    for m in SETTING_RANGE {
        for n in SETTING_RANGE {
            out.push((m, n));
        }
    }
    out
}

/// A truth group of a game. The provenance fields are optional and only
/// used for reporting breakdowns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthGroup {
    pub topic: String,
    pub words: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub culturally_related: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<Tag>,
}

impl TruthGroup {
    pub fn new(topic: impl Into<String>, words: Vec<String>) -> Self {
        Self { topic: topic.into(), words, source_id: None, culturally_related: None, tags: Vec::new() }
    }
}

/// An m x n word grouping game: `m` truth groups of `n` words, and the
/// shuffled pool of all `m * n` words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Game {
    pub id: String,
    pub subset: String,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub groups: Vec<TruthGroup>,
    pub pool: Vec<String>,
}

impl Game {
    /// Total number of words, `m * n`.
    pub fn word_count(&self) -> usize {
        self.m * self.n
    }

    pub fn topics(&self) -> Vec<&str> {
        self.groups.iter().map(|g| g.topic.as_str()).collect()
    }

    /// Group index of every pool word, aligned with `pool`.
    pub fn truth_labels(&self) -> Vec<usize> {
        let index: HashMap<String, usize> = self
            .groups
            .iter()
            .enumerate()
            .flat_map(|(i, g)| g.words.iter().map(move |w| (normalize_word(w), i)))
            .collect();
        self.pool.iter().map(|w| index.get(&normalize_word(w)).copied().unwrap_or(usize::MAX)).collect()
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if !SETTING_RANGE.contains(&self.m) {
            return Err(GameError::GroupCount(self.m));
        }
        if !SETTING_RANGE.contains(&self.n) {
            return Err(GameError::GroupSize(self.n));
        }
        if self.groups.len() != self.m {
            return Err(GameError::GroupTotal { expected: self.m, found: self.groups.len() });
        }
        let mut words = HashSet::new();
        let mut topics = HashSet::new();
        for (index, g) in self.groups.iter().enumerate() {
            if g.words.len() != self.n {
                return Err(GameError::GroupWords { index, expected: self.n, found: g.words.len() });
            }
            if !topics.insert(topic_key(&g.topic)) {
                return Err(GameError::RepeatedTopic(g.topic.clone()));
            }
            for w in &g.words {
                if !words.insert(normalize_word(w)) {
                    return Err(GameError::RepeatedWord(w.clone()));
                }
            }
        }
        if self.pool.len() != self.word_count() {
            return Err(GameError::PoolSize { expected: self.word_count(), found: self.pool.len() });
        }
        let mut pool = HashSet::new();
        for w in &self.pool {
            let key = normalize_word(w);
            if !words.contains(&key) {
                return Err(GameError::PoolMismatch(w.clone()));
            }
            if !pool.insert(key) {
                return Err(GameError::RepeatedWord(w.clone()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game serializes")
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let mut text = self.to_json();
        text.push('\n');
        std::fs::write(path, text)
    }
}
