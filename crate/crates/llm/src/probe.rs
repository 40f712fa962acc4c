//! Candidate proposals: which pool words a model would file under each
//! topic when words may be reused.

use std::collections::HashMap;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use wordgroup_core::analysis::Proposals;
use wordgroup_core::embeddings::{cosine, embed_phrase, EmbeddingTable, Tokenizer};
use wordgroup_core::text::topic_key;
use wordgroup_core::{Game, Scalar};

use crate::client::{LlmError, ModelClient, RawResponse};
use crate::parse::split_list;
use crate::prompt::build_overlap_prompt;

static ENTRY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#""([^"\n]{1,200})"\s*:\s*\[([^\[\]]*)\]|'([^'\n]{1,200})'\s*:\s*\[([^\[\]]*)\]"#).expect("valid regex")
});

/// Salt for the single re-query after a bad proposal response.
pub const RETRY_SALT: &str = "probe-retry-1";

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error("no topic mapping found in response")]
    Unparseable,
    #[error("topic {0:?} missing from proposals")]
    MissingTopic(String),
}

/// Extracts `"topic": [words]` pairs, in either quote style, in order.
pub fn parse_proposals(raw: &str) -> Result<Vec<(String, Vec<String>)>, ProbeError> {
    let entries: Vec<(String, Vec<String>)> = ENTRY
        .captures_iter(raw)
        .map(|c| {
            let (topic, list) = match c.get(1) {
                Some(t) => (t.as_str(), &c[2]),
                None => (&c[3], &c[4]),
            };
            (topic.trim().to_string(), split_list(list))
        })
        .collect();
    if entries.is_empty() {
        return Err(ProbeError::Unparseable);
    }
    Ok(entries)
}

/// Aligns parsed entries with the game: topics matched ignoring case and
/// renamed to the game's spelling, words mapped to pool spellings, words
/// outside the pool dropped and recorded.
pub fn align_proposals(game: &Game, entries: &[(String, Vec<String>)]) -> Result<Proposals, ProbeError> {
    let pool: HashMap<String, &String> = game.pool.iter().map(|w| (topic_key(w), w)).collect();
    let mut by_topic: HashMap<String, &Vec<String>> = HashMap::new();
    for (t, ws) in entries {
        by_topic.entry(topic_key(t)).or_insert(ws);
    }
    let mut dropped = Vec::new();
    let mut aligned = Vec::with_capacity(game.m);
    for topic in game.topics() {
        let words = by_topic.get(&topic_key(topic)).ok_or_else(|| ProbeError::MissingTopic(topic.to_string()))?;
        let mut kept: Vec<String> = Vec::new();
        for w in words.iter() {
            match pool.get(&topic_key(w)) {
                Some(p) if !kept.contains(p) => kept.push((*p).clone()),
                Some(_) => {}
                None => dropped.push(w.clone()),
            }
        }
        aligned.push((topic.to_string(), kept));
    }
    let mut proposals = Proposals::new(aligned);
    proposals.dropped_words = dropped;
    Ok(proposals)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub proposals: Proposals,
    pub responses: Vec<RawResponse>,
    pub retried: bool,
}

/// Queries the proposal prompt; an unparseable reply or a missing topic gets
/// one re-query before the error is returned.
pub fn probe_overlap(client: &ModelClient, game: &Game) -> Result<ProbeOutcome, ProbeError> {
    let prompt = build_overlap_prompt(game);
    let mut responses = Vec::new();
    let mut last_err = ProbeError::Unparseable;
    for salt in ["", RETRY_SALT] {
        let (response, _) = client.query(&game.id, &prompt, salt)?;
        let result = parse_proposals(&response.text).and_then(|e| align_proposals(game, &e));
        responses.push(response);
        match result {
            Ok(proposals) => return Ok(ProbeOutcome { proposals, retried: responses.len() > 1, responses }),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Deterministic offline prober, not a model: each pool word goes to its
/// most similar topic and to every other topic whose embedding cosine with
/// the word exceeds the threshold.
#[derive(Debug, Clone)]
pub struct EmbeddingProber<'a, F> {
    pub table: &'a EmbeddingTable<F>,
    pub threshold: F,
}

impl<'a, F: Scalar> EmbeddingProber<'a, F> {
    pub fn new(table: &'a EmbeddingTable<F>, threshold: F) -> Self {
        Self { table, threshold }
    }

    pub fn probe(&self, game: &Game) -> Proposals {
        let topics: Vec<Vec<F>> =
            game.topics().iter().map(|t| embed_phrase(self.table, t, Tokenizer::default()).values).collect();
        let mut lists: Vec<Vec<String>> = vec![Vec::new(); topics.len()];
        for word in &game.pool {
            let v = embed_phrase(self.table, word, Tokenizer::default()).values;
            let sims: Vec<F> = topics.iter().map(|t| cosine(&v, t).unwrap_or_else(|_| F::zero())).collect();
            let best = sims
                .iter()
                .enumerate()
                .fold(0, |b, (i, s)| if *s > sims[b] { i } else { b });
            for (i, s) in sims.iter().enumerate() {
                if i == best || *s > self.threshold {
                    lists[i].push(word.clone());
                }
            }
        }
        Proposals::new(game.topics().into_iter().map(str::to_string).zip(lists))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wordgroup_core::TruthGroup;

    fn game() -> Game {
        let groups = vec![
            TruthGroup::new("Fruit", vec!["apple".into(), "pear".into()]),
            TruthGroup::new("Pets", vec!["dog".into(), "cat".into()]),
        ];
        Game {
            id: "g".into(),
            subset: "en".into(),
            m: 2,
            n: 2,
            seed: 0,
            groups,
            pool: vec!["cat".into(), "pear".into(), "apple".into(), "dog".into()],
        }
    }

    #[test]
    fn both_quote_styles() {
        let e = parse_proposals(r#"{"A's": ["x", "y"], 'B': ['z']}"#).unwrap();
        assert_eq!(e, vec![("A's".into(), vec!["x".into(), "y".into()]), ("B".into(), vec!["z".into()])]);
        assert!(matches!(parse_proposals("none"), Err(ProbeError::Unparseable)));
    }

    #[test]
    fn alignment_fixes_case_and_drops_strangers() {
        let entries = vec![
            ("FRUIT".to_string(), vec!["Apple".to_string(), "pear".into(), "kiwi".into()]),
            ("pets".to_string(), vec!["dog".to_string(), "cat".into(), "pear".into()]),
        ];
        let p = align_proposals(&game(), &entries).unwrap();
        assert_eq!(p.entries[0].topic, "Fruit");
        assert_eq!(p.entries[0].words, vec!["apple", "pear"]);
        assert_eq!(p.entries[1].words, vec!["dog", "cat", "pear"]);
        assert_eq!(p.dropped_words, vec!["kiwi"]);
    }

    #[test]
    fn missing_topic_is_error() {
        let entries = vec![("Fruit".to_string(), vec!["apple".to_string()])];
        assert!(matches!(align_proposals(&game(), &entries), Err(ProbeError::MissingTopic(t)) if t == "Pets"));
    }

    #[test]
    fn embedding_prober_assigns_by_similarity() {
        let table = EmbeddingTable::from_entries(
            "en",
            vec![
                ("fruit".to_string(), vec![1.0, 0.0]),
                ("pets".to_string(), vec![0.0, 1.0]),
                ("apple".to_string(), vec![1.0, 0.1]),
                ("pear".to_string(), vec![1.0, 0.0]),
                ("dog".to_string(), vec![0.1, 1.0]),
                ("cat".to_string(), vec![0.8, 1.0]),
            ],
        )
        .unwrap();
        let p = EmbeddingProber::new(&table, 0.6).probe(&game());
        assert_eq!(p.entries[0].words, vec!["cat", "pear", "apple"]);
        assert_eq!(p.entries[1].words, vec!["cat", "dog"]);
    }
}
