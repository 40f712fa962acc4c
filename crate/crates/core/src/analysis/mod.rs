//! Game difficulty metrics and the statistics used to validate them.

pub mod ari;
pub mod binning;
pub mod calibrate;
pub mod difficulty;
pub mod overlap;
pub mod silhouette;
pub mod stats;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use ari::adjusted_rand_index;
pub use binning::{bin_scores, BinningConfig, BinnedScores, Placement};
pub use calibrate::{calibrate_ta, default_thresholds, Calibration};
pub use difficulty::{integrated_difficulty, DifficultyWeights};
pub use overlap::{word_overlap, OverlapMode, Proposals};
pub use silhouette::silhouette;
pub use stats::{randolph_kappa, spearman};

use crate::embeddings::{embed_phrase, normalized, EmbeddingTable, Tokenizer};
use crate::error::AnalysisError;
use crate::game::Game;
use crate::kmeans::kmeans;
use crate::scalar::Scalar;
use crate::text::normalize_word;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyProfile<F> {
    pub group_count: usize,
    pub group_size: usize,
    pub ari: F,
    pub silhouette_truth: F,
    pub silhouette_predicted: Option<F>,
    /// Raw overlap; only the integrated score clamps it.
    pub word_overlap: F,
    pub integrated: F,
}

/// Unit-normalized phrase vectors for every pool word, in pool order.
/// Out-of-vocabulary words stay at the zero vector.
pub fn pool_vectors<F: Scalar>(game: &Game, table: &EmbeddingTable<F>) -> Vec<Vec<F>> {
    game.pool.iter().map(|w| normalized(&embed_phrase(table, w, Tokenizer::default()).values)).collect()
}

/// ARI between the truth groups and a k-means clustering (k = m) of the
/// embedded pool words.
pub fn game_ari<F: Scalar>(game: &Game, table: &EmbeddingTable<F>, seed: u64) -> Result<F, AnalysisError> {
    if game.m < 2 {
        return Err(AnalysisError::SingleCluster);
    }
    let points = pool_vectors(game, table);
    let clusters = kmeans(&points, game.m, seed)?;
    adjusted_rand_index(&game.truth_labels(), &clusters.labels)
}

pub fn truth_silhouette<F: Scalar>(game: &Game, table: &EmbeddingTable<F>) -> Result<F, AnalysisError> {
    silhouette(&pool_vectors(game, table), &game.truth_labels())
}

/// Silhouette of a predicted grouping over the pool words it places. Each
/// pool word takes the first predicted group containing it; unplaced words
/// are left out. `None` when fewer than two groups are non-empty.
pub fn predicted_silhouette<F: Scalar>(
    game: &Game,
    table: &EmbeddingTable<F>,
    predicted: &[Vec<String>],
) -> Option<F> {
    let mut owner: HashMap<String, usize> = HashMap::new();
    for (g, words) in predicted.iter().enumerate() {
        for w in words {
            owner.entry(normalize_word(w)).or_insert(g);
        }
    }
    let vectors = pool_vectors(game, table);
    let (points, labels): (Vec<Vec<F>>, Vec<usize>) = game
        .pool
        .iter()
        .zip(vectors)
        .filter_map(|(w, v)| owner.get(&normalize_word(w)).map(|&g| (v, g)))
        .unzip();
    silhouette(&points, &labels).ok()
}
