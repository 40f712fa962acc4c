//! The single JSON configuration file driving every subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use wordgroup_core::analysis::OverlapMode;
use wordgroup_core::{all_settings, BinningConfig, DifficultyWeights, Embeddings, ScoringConfig};
use wordgroup_llm::ModelConfig;

/// A grouping dataset: a bare path, or a path plus the language of its
/// words when that differs from the subset name (e.g. translated subsets).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatasetSpec {
    Path(PathBuf),
    Full { path: PathBuf, language: Option<String> },
}

impl DatasetSpec {
    pub fn path(&self) -> &Path {
        match self {
            DatasetSpec::Path(p) | DatasetSpec::Full { path: p, .. } => p,
        }
    }

    pub fn language(&self) -> Option<&str> {
        match self {
            DatasetSpec::Path(_) => None,
            DatasetSpec::Full { language, .. } => language.as_deref(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceMode {
    /// Keep each source game's groups together and sample words per group.
    #[default]
    Sequential,
    /// Pool all source groups and sample games from them.
    Shuffled,
}

/// Games read from a file of source games (JSON array or JSON lines).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub mode: SourceMode,
    #[serde(default = "default_language")]
    pub language: String,
}

fn default_language() -> String {
    "en".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub path: PathBuf,
    /// Read at most this many vectors.
    #[serde(default)]
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProbeSpec {
    /// Ask `probe_model` for candidate proposals.
    #[default]
    Model,
    /// Offline embedding-similarity prober.
    Embedding { threshold: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Subset name to grouping dataset.
    pub datasets: BTreeMap<String, DatasetSpec>,
    /// Subset name to source games.
    pub source_games: BTreeMap<String, SourceSpec>,
    /// Language (or subset name) to word vectors.
    pub embeddings: BTreeMap<String, EmbeddingSpec>,
    pub models: BTreeMap<String, ModelConfig>,
    /// Model used to reformat unparseable responses.
    pub repair_model: Option<String>,
    /// Model asked for candidate proposals.
    pub probe_model: Option<String>,
    pub probe: ProbeSpec,
    pub settings: Vec<(usize, usize)>,
    /// Games per setting; split evenly into dev and test.
    pub count: usize,
    pub master_seed: u64,
    pub kmeans_seed: u64,
    pub suite_dir: PathBuf,
    pub results_dir: PathBuf,
    pub cache_dir: PathBuf,
    pub report_dir: PathBuf,
    /// Records appended per flush during evaluation.
    pub chunk_size: usize,
    pub scoring: ScoringConfig,
    pub weights: DifficultyWeights,
    pub bins: BinningConfig,
    pub overlap_mode: OverlapMode,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            datasets: BTreeMap::new(),
            source_games: BTreeMap::new(),
            embeddings: BTreeMap::new(),
            models: BTreeMap::new(),
            repair_model: None,
            probe_model: None,
            probe: ProbeSpec::default(),
            settings: all_settings(),
            count: 600,
            master_seed: 0,
            kmeans_seed: 0,
            suite_dir: "suites".into(),
            results_dir: "results".into(),
            cache_dir: "cache".into(),
            report_dir: "report".into(),
            chunk_size: 32,
            scoring: ScoringConfig::default(),
            weights: DifficultyWeights::default(),
            bins: BinningConfig::default(),
            overlap_mode: OverlapMode::default(),
        }
    }
}

impl Config {
    /// Reads a config file; relative paths are resolved against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Config =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.resolve(path.parent().unwrap_or(Path::new(".")));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for spec in self.datasets.values_mut() {
            match spec {
                DatasetSpec::Path(p) | DatasetSpec::Full { path: p, .. } => fix(p),
            }
        }
        self.source_games.values_mut().for_each(|s| fix(&mut s.path));
        self.embeddings.values_mut().for_each(|e| fix(&mut e.path));
        for p in [&mut self.suite_dir, &mut self.results_dir, &mut self.cache_dir, &mut self.report_dir] {
            fix(p);
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, m) in &self.models {
            m.validate().map_err(|e| anyhow::anyhow!("models.{name}: {e}"))?;
        }
        for (key, name) in [("repair_model", &self.repair_model), ("probe_model", &self.probe_model)] {
            if let Some(n) = name {
                if !self.models.contains_key(n) {
                    bail!("{key}: unknown model {n:?}");
                }
            }
        }
        if self.chunk_size == 0 {
            bail!("chunk_size must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.scoring.ta_threshold) {
            bail!("scoring.ta_threshold must lie in [0, 1]");
        }
        Ok(())
    }

    /// Language whose embeddings serve a subset.
    pub fn language_of(&self, subset: &str) -> String {
        if let Some(lang) = self.datasets.get(subset).and_then(|d| d.language()) {
            return lang.to_string();
        }
        if let Some(src) = self.source_games.get(subset) {
            return src.language.clone();
        }
        subset.to_string()
    }

    pub fn embedding_spec(&self, subset: &str) -> Result<&EmbeddingSpec> {
        let lang = self.language_of(subset);
        self.embeddings
            .get(subset)
            .or_else(|| self.embeddings.get(&lang))
            .with_context(|| format!("no embeddings configured for subset {subset:?} (language {lang:?})"))
    }

    pub fn load_embeddings(&self, subset: &str) -> Result<Embeddings> {
        let spec = self.embedding_spec(subset)?;
        wordgroup_core::embeddings::load_vectors(&spec.path, spec.limit, &self.language_of(subset))
            .with_context(|| format!("embeddings for subset {subset:?}"))
    }

    pub fn model(&self, name: &str) -> Result<&ModelConfig> {
        self.models.get(name).with_context(|| format!("models: unknown model {name:?}"))
    }

    /// Every subset a suite can be generated for.
    pub fn subsets(&self) -> Vec<String> {
        let mut names: Vec<String> = self.datasets.keys().chain(self.source_games.keys()).cloned().collect();
        names.sort();
        names.dedup();
        names
    }
}
