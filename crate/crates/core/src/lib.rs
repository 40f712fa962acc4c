//! Word grouping games: grouping datasets, seeded game synthesis, answer
//! scoring, and difficulty analysis.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`). The aliases at
//! the crate root fix the scalar for the common cases: `f64` for scores and
//! statistics, `f32` for large embedding tables.

pub mod analysis;
pub mod answer;
pub mod embeddings;
pub mod error;
pub mod game;
pub mod gamegen;
pub mod grouping;
pub mod kmeans;
pub mod scalar;
pub mod scoring;
pub mod text;

pub use answer::{AnswerGroup, ParsedAnswer};
pub use error::{AnalysisError, ClusterError, DatasetError, EmbeddingError, GameError, GenerationError};
pub use game::{all_settings, Game, TruthGroup};
pub use gamegen::{
    derive_sequential_games, generate_game, generate_suite, GameSuite, SourceGame, Split, SuiteManifest,
};
pub use grouping::{load_groupings, validate_dataset, GroupingDataset, Tag, ValidationReport, WordGrouping};
pub use scalar::Scalar;
pub use text::normalize_word;

/// Embedding table with `f64` components.
pub type Embeddings = embeddings::EmbeddingTable<f64>;
/// Embedding table with `f32` components, for large vocabularies.
pub type Embeddings32 = embeddings::EmbeddingTable<f32>;
pub type PhraseVector = embeddings::PhraseVector<f64>;
pub type ScoringConfig = scoring::ScoringConfig<f64>;
pub type GameScore = scoring::GameScore<f64>;
pub type TopicSimilarity = scoring::TopicSimilarity<f64>;
pub type DifficultyProfile = analysis::DifficultyProfile<f64>;
pub type DifficultyWeights = analysis::DifficultyWeights<f64>;
pub type BinningConfig = analysis::BinningConfig<f64>;
pub type Calibration = analysis::Calibration<f64>;
