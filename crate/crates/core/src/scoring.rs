//! Scoring a parsed answer against a game's truth groups.
//!
//! Truth groups are matched greedily to predicted groups by largest word
//! intersection. Each matched pair gets a group F1, an exact-match (CTD)
//! indicator and a Topic Achieved flag, all averaged over the game.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::answer::ParsedAnswer;
use crate::embeddings::{cosine, embed_phrase, EmbeddingTable, Tokenizer};
use crate::game::Game;
use crate::scalar::{mean, Scalar};
use crate::text::{dedup_words, normalize_word};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "F: Scalar"))]
pub struct ScoringConfig<F> {
    pub ta_threshold: F,
    /// Only the first `m` distinct predicted groups are scored.
    pub truncate_to_n: bool,
}

impl<F: Scalar> Default for ScoringConfig<F> {
    fn default() -> Self {
        Self { ta_threshold: F::lit(0.3), truncate_to_n: true }
    }
}

impl<F: Scalar> ScoringConfig<F> {
    pub fn with_threshold(ta_threshold: F) -> Self {
        assert!(ta_threshold >= F::zero() && ta_threshold <= F::one(), "threshold outside [0, 1]");
        Self { ta_threshold, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchPair {
    pub truth: usize,
    pub predicted: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchStep {
    pub intersection: usize,
    pub truth: usize,
    pub predicted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    /// One entry per truth group, in truth order.
    pub pairs: Vec<MatchPair>,
    /// Greedy choices in the order they were made.
    pub trace: Vec<MatchStep>,
}

impl Matching {
    pub fn predicted_for(&self, truth: usize) -> Option<usize> {
        self.pairs[truth].predicted
    }
}

fn as_set(words: &[String]) -> HashSet<&str> {
    words.iter().map(String::as_str).collect()
}

fn intersection(a: &[String], b: &[String]) -> usize {
    let b = as_set(b);
    as_set(a).iter().filter(|w| b.contains(*w)).count()
}

/// Greedy assignment: repeatedly take the unassigned (truth, predicted) pair
/// with the largest intersection, ties to the smaller truth index and then the
/// smaller predicted index. Truths left over when predictions run out map to
/// `None`; surplus predictions are ignored.
pub fn match_groups(predicted: &[Vec<String>], truth: &[Vec<String>]) -> Matching {
    let sizes: Vec<Vec<usize>> =
        truth.iter().map(|t| predicted.iter().map(|p| intersection(t, p)).collect()).collect();
    let mut truth_free = vec![true; truth.len()];
    let mut pred_free = vec![true; predicted.len()];
    let mut pairs: Vec<MatchPair> = (0..truth.len()).map(|t| MatchPair { truth: t, predicted: None }).collect();
    let mut trace = Vec::new();

    for _ in 0..truth.len().min(predicted.len()) {
        let mut best: Option<MatchStep> = None;
        for (t, row) in sizes.iter().enumerate().filter(|(t, _)| truth_free[*t]) {
            for (p, &size) in row.iter().enumerate().filter(|(p, _)| pred_free[*p]) {
                if best.is_none_or(|b| size > b.intersection) {
                    best = Some(MatchStep { intersection: size, truth: t, predicted: p });
                }
            }
        }
        let step = best.expect("free pair exists");
        truth_free[step.truth] = false;
        pred_free[step.predicted] = false;
        pairs[step.truth].predicted = Some(step.predicted);
        trace.push(step);
    }
    Matching { pairs, trace }
}

/// F1 of one truth group against its matched prediction. Zero for a `None`
/// match, an empty prediction, or no shared words. Predicted words outside
/// the pool still count against precision.
pub fn group_f1<F: Scalar>(truth: &[String], predicted: Option<&[String]>) -> F {
    let Some(predicted) = predicted else { return F::zero() };
    let tp = intersection(truth, predicted);
    let (n_pred, n_truth) = (as_set(predicted).len(), as_set(truth).len());
    if tp == 0 || n_pred == 0 || n_truth == 0 {
        return F::zero();
    }
    let precision = F::from_count(tp) / F::from_count(n_pred);
    let recall = F::from_count(tp) / F::from_count(n_truth);
    F::lit(2.0) * precision * recall / (precision + recall)
}

fn same_set(a: &[String], b: &[String]) -> bool {
    as_set(a) == as_set(b)
}

/// Fraction of truth groups whose matched prediction is exactly right.
pub fn game_ctd<F: Scalar>(matching: &Matching, truth: &[Vec<String>], predicted: &[Vec<String>]) -> F {
    if truth.is_empty() {
        return F::zero();
    }
    let exact = matching
        .pairs
        .iter()
        .filter(|pair| pair.predicted.is_some_and(|p| same_set(&truth[pair.truth], &predicted[p])))
        .count();
    F::from_count(exact) / F::from_count(truth.len())
}

/// Cosine similarities of a predicted topic to its matched truth topic and
/// to every other truth topic of the game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSimilarity<F> {
    /// `None` when the truth group was matched to nothing.
    pub matched: Option<F>,
    pub others: Vec<F>,
}

impl<F: Scalar> TopicSimilarity<F> {
    /// Achieved when the matched similarity meets the threshold and is
    /// strictly above every other similarity.
    pub fn achieved(&self, threshold: F) -> bool {
        match self.matched {
            Some(s) => s >= threshold && self.others.iter().all(|o| s > *o),
            None => false,
        }
    }
}

pub fn topic_similarity<F: Scalar>(
    pred_topic: Option<&str>,
    matched_topic: &str,
    other_topics: &[&str],
    table: &EmbeddingTable<F>,
) -> TopicSimilarity<F> {
    let Some(pred) = pred_topic else {
        return TopicSimilarity { matched: None, others: Vec::new() };
    };
    let embed = |s: &str| embed_phrase(table, s, Tokenizer::default()).values;
    let p = embed(pred);
    let sim = |s: &str| cosine(&p, &embed(s)).expect("same table dimension");
    TopicSimilarity { matched: Some(sim(matched_topic)), others: other_topics.iter().map(|t| sim(t)).collect() }
}

pub fn topic_achieved<F: Scalar>(
    pred_topic: Option<&str>,
    matched_topic: &str,
    other_topics: &[&str],
    table: &EmbeddingTable<F>,
    cfg: &ScoringConfig<F>,
) -> bool {
    topic_similarity(pred_topic, matched_topic, other_topics, table).achieved(cfg.ta_threshold)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameScore<F> {
    pub matching: Vec<MatchPair>,
    pub trace: Vec<MatchStep>,
    pub per_group_f1: Vec<F>,
    pub game_f1: F,
    pub game_ctd: F,
    pub topic_achieved: Vec<bool>,
    pub ta_rate: F,
    /// Predicted groups left after deduplication and truncation.
    pub predicted_considered: usize,
    /// The response restated its answer; only the first groups were scored.
    pub multi_block: bool,
}

/// Predicted groups as scored: words normalized and deduplicated, repeated
/// (topic, word set) entries dropped, and optionally cut to the first `m`.
pub fn prepare_predictions(answer: &ParsedAnswer, m: usize, truncate: bool) -> Vec<(String, Vec<String>)> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    for g in &answer.groups {
        let topic = normalize_word(&g.topic);
        let words = dedup_words(&g.words);
        if out.iter().any(|(t, w)| *t == topic && same_set(w, &words)) {
            continue;
        }
        out.push((topic, words));
    }
    if truncate {
        out.truncate(m);
    }
    out
}

pub fn score_game<F: Scalar>(
    game: &Game,
    answer: &ParsedAnswer,
    table: &EmbeddingTable<F>,
    cfg: &ScoringConfig<F>,
) -> GameScore<F> {
    let truth: Vec<Vec<String>> = game.groups.iter().map(|g| dedup_words(&g.words)).collect();
    let predictions = prepare_predictions(answer, game.m, cfg.truncate_to_n);
    let predicted: Vec<Vec<String>> = predictions.iter().map(|(_, w)| w.clone()).collect();

    let matching = match_groups(&predicted, &truth);
    let per_group_f1: Vec<F> = matching
        .pairs
        .iter()
        .map(|pair| group_f1(&truth[pair.truth], pair.predicted.map(|p| predicted[p].as_slice())))
        .collect();
    let topics = game.topics();
    let topic_achieved: Vec<bool> = matching
        .pairs
        .iter()
        .map(|pair| {
            let others: Vec<&str> =
                topics.iter().enumerate().filter(|(i, _)| *i != pair.truth).map(|(_, t)| *t).collect();
            let pred_topic = pair.predicted.map(|p| predictions[p].0.as_str());
            topic_achieved(pred_topic, topics[pair.truth], &others, table, cfg)
        })
        .collect();
    let ta_flags: Vec<F> = topic_achieved.iter().map(|&b| if b { F::one() } else { F::zero() }).collect();

    GameScore {
        game_f1: mean(&per_group_f1).unwrap_or_else(F::zero),
        game_ctd: game_ctd(&matching, &truth, &predicted),
        ta_rate: mean(&ta_flags).unwrap_or_else(F::zero),
        per_group_f1,
        topic_achieved,
        predicted_considered: predicted.len(),
        multi_block: answer.is_multi_block(),
        matching: matching.pairs,
        trace: matching.trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn f1_cases() {
        let truth = words(&["a", "b", "c", "d"]);
        assert_eq!(group_f1::<f64>(&truth, Some(&truth)), 1.0);
        assert_eq!(group_f1::<f64>(&truth, Some(&words(&["a", "b", "c", "x"]))), 0.75);
        let f = group_f1::<f64>(&truth, Some(&words(&["a", "b", "x", "y", "z"])));
        assert!((f - 4.0 / 9.0).abs() < 1e-12);
        assert_eq!(group_f1::<f64>(&truth, None), 0.0);
        assert_eq!(group_f1::<f64>(&truth, Some(&[])), 0.0);
        assert_eq!(group_f1::<f64>(&truth, Some(&words(&["x"]))), 0.0);
    }

    #[test]
    fn fewer_predictions_map_to_none() {
        let truth = vec![words(&["a", "b", "c", "d"]), words(&["e", "f", "g", "h"])];
        let pred = vec![words(&["a", "b", "c", "x"])];
        let m = match_groups(&pred, &truth);
        assert_eq!(m.pairs, vec![MatchPair { truth: 0, predicted: Some(0) }, MatchPair { truth: 1, predicted: None }]);
        assert_eq!(m.trace, vec![MatchStep { intersection: 3, truth: 0, predicted: 0 }]);
    }

    #[test]
    fn ties_prefer_lower_indices() {
        let truth = vec![words(&["a", "b"]), words(&["c", "d"])];
        let pred = vec![words(&["a", "c"]), words(&["b", "d"])];
        let m = match_groups(&pred, &truth);
        assert_eq!(m.trace[0], MatchStep { intersection: 1, truth: 0, predicted: 0 });
        assert_eq!(m.trace[1], MatchStep { intersection: 1, truth: 1, predicted: 1 });
    }

    #[test]
    fn one_word_swaps_zero_ctd() {
        let truth = vec![words(&["a", "b", "c", "d"]), words(&["e", "f", "g", "h"])];
        let pred = vec![words(&["a", "b", "c", "e"]), words(&["d", "f", "g", "h"])];
        let m = match_groups(&pred, &truth);
        assert_eq!(game_ctd::<f64>(&m, &truth, &pred), 0.0);
        let f1: Vec<f64> = m.pairs.iter().map(|p| group_f1(&truth[p.truth], p.predicted.map(|i| pred[i].as_slice()))).collect();
        assert_eq!(f1, vec![0.75, 0.75]);
    }

    #[test]
    fn ta_strictness() {
        let sim = TopicSimilarity { matched: Some(0.5), others: vec![0.5] };
        assert!(!sim.achieved(0.3));
        let sim = TopicSimilarity { matched: Some(0.3), others: vec![0.1] };
        assert!(sim.achieved(0.3));
        let sim = TopicSimilarity::<f64> { matched: None, others: vec![] };
        assert!(!sim.achieved(0.0));
    }
}
