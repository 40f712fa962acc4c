use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record at line {line}: {message}")]
    Malformed { line: usize, message: String },
}

impl DatasetError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        DatasetError::Io { path: path.to_path_buf(), source }
    }
}

/// A broken game invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("group count {0} outside 2..=4")]
    GroupCount(usize),
    #[error("group size {0} outside 2..=4")]
    GroupSize(usize),
    #[error("expected {expected} groups, found {found}")]
    GroupTotal { expected: usize, found: usize },
    #[error("group {index} has {found} words, expected {expected}")]
    GroupWords { index: usize, expected: usize, found: usize },
    #[error("pool has {found} words, expected {expected}")]
    PoolSize { expected: usize, found: usize },
    #[error("word {0:?} repeated within the game")]
    RepeatedWord(String),
    #[error("topic {0:?} repeated within the game")]
    RepeatedTopic(String),
    #[error("pool word {0:?} is not in any group")]
    PoolMismatch(String),
}

#[derive(Debug, Error)]
pub enum GenerationError {
    #[error("setting {m}x{n} outside the supported 2..=4 range")]
    UnsupportedSetting { m: usize, n: usize },
    #[error("dataset has {available} groupings, game needs {needed}")]
    TooFewGroupings { available: usize, needed: usize },
    #[error("grouping {id} has {found} words, cannot sample {needed}")]
    ShortGrouping { id: String, found: usize, needed: usize },
    #[error("no word-disjoint selection of {m} groups found after {attempts} attempts")]
    Infeasible { m: usize, attempts: usize },
    #[error("games per setting must be even, got {0}")]
    OddCount(usize),
    #[error("source game {id}: {reason}")]
    InvalidSource { id: String, reason: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad header {0:?}, expected \"count dim\"")]
    BadHeader(String),
    #[error("header declares {declared} vectors but file holds {found}")]
    HeaderMismatch { declared: usize, found: usize },
    #[error("line {line}: expected {expected} values, found {found}")]
    RowArity { line: usize, expected: usize, found: usize },
    #[error("line {line}: {value:?} is not a number")]
    BadValue { line: usize, value: String },
    #[error("vector table is empty")]
    Empty,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClusterError {
    #[error("k = {k} but only {points} points")]
    TooFewPoints { k: usize, points: usize },
    #[error("k must be at least 1")]
    ZeroClusters,
    #[error("points have inconsistent dimensions")]
    Ragged,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("label lists differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} items, got {found}")]
    TooFewItems { needed: usize, found: usize },
    #[error("need at least two clusters")]
    SingleCluster,
    #[error("proposals missing topic {0:?}")]
    MissingTopic(String),
    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange { name: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("category count must be at least 2, got {0}")]
    CategoryCount(usize),
    #[error("bin edges must be strictly increasing")]
    BadEdges,
    #[error("no candidate thresholds")]
    NoThresholds,
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}
