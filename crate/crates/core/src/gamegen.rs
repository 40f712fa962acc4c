//! Seeded game synthesis from grouping datasets.
//!
//! Two derivations are supported:
//! * shuffled generation samples `m` groupings independently from a dataset
//!   and `n` words from each ([`generate_game`], [`generate_suite`]);
//! * sequential derivation keeps the four groups of a source game together
//!   and only samples `n` words per group ([`derive_sequential_games`]).

use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GenerationError;
use crate::game::{Game, TruthGroup, SETTING_RANGE};
use crate::grouping::{GroupingDataset, WordGrouping};
use crate::text::{normalize_word, topic_key};

/// Rejection-sampling cap per game.
pub const MAX_ATTEMPTS: usize = 1000;

/// Groups per source game for sequential derivation.
pub const SOURCE_GROUPS: usize = 4;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit hash of `(master_seed, m, n, index)`.
pub fn derive_seed(master_seed: u64, m: usize, n: usize, index: u64) -> u64 {
    [m as u64, n as u64, index].iter().fold(splitmix64(master_seed), |h, &v| splitmix64(h ^ v))
}

fn check_setting(m: usize, n: usize) -> Result<(), GenerationError> {
    if SETTING_RANGE.contains(&m) && SETTING_RANGE.contains(&n) {
        Ok(())
    } else {
        Err(GenerationError::UnsupportedSetting { m, n })
    }
}

fn sample_words(rng: &mut ChaCha8Rng, words: &[String], n: usize) -> Vec<String> {
    index::sample(rng, words.len(), n).into_iter().map(|i| words[i].clone()).collect()
}

fn truth_group(g: &WordGrouping, words: Vec<String>) -> TruthGroup {
    TruthGroup {
        topic: g.topic.clone(),
        words,
        source_id: Some(g.id.clone()),
        culturally_related: Some(g.culturally_related),
        tags: g.tags.clone(),
    }
}

fn pairwise_unique(groups: &[TruthGroup]) -> bool {
    let mut words = HashSet::new();
    let mut topics = HashSet::new();
    groups.iter().all(|g| {
        topics.insert(topic_key(&g.topic)) && g.words.iter().all(|w| words.insert(normalize_word(w)))
    })
}

fn assemble(id: String, subset: &str, m: usize, n: usize, seed: u64, groups: Vec<TruthGroup>, rng: &mut ChaCha8Rng) -> Game {
    let mut pool: Vec<String> = groups.iter().flat_map(|g| g.words.iter().cloned()).collect();
    pool.shuffle(rng);
    Game { id, subset: subset.to_string(), m, n, seed, groups, pool }
}

/// Samples one `m` x `n` game. Identical inputs give an identical game.
pub fn generate_game(d: &GroupingDataset, m: usize, n: usize, seed: u64) -> Result<Game, GenerationError> {
    let id = format!("{}-{m}x{n}-{seed:016x}", d.subset_name);
    generate_game_with_id(d, m, n, seed, id)
}

pub fn generate_game_with_id(
    d: &GroupingDataset,
    m: usize,
    n: usize,
    seed: u64,
    id: String,
) -> Result<Game, GenerationError> {
    check_setting(m, n)?;
    if d.len() < m {
        return Err(GenerationError::TooFewGroupings { available: d.len(), needed: m });
    }
    if let Some(g) = d.groupings.iter().find(|g| g.words.len() < n) {
        return Err(GenerationError::ShortGrouping { id: g.id.clone(), found: g.words.len(), needed: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let groups: Vec<TruthGroup> = index::sample(&mut rng, d.len(), m)
            .into_iter()
            .map(|i| {
                let g = &d.groupings[i];
                let words = sample_words(&mut rng, &g.words, n);
                truth_group(g, words)
            })
            .collect();
        if pairwise_unique(&groups) {
            let game = assemble(id, &d.subset_name, m, n, seed, groups, &mut rng);
            game.validate()?;
            return Ok(game);
        }
    }
    Err(GenerationError::Infeasible { m, attempts: MAX_ATTEMPTS })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Dev,
    Test,
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Split::Dev => "dev",
            Split::Test => "test",
        })
    }
}

/// All games for one setting of one subset, split into dev and test halves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSuite {
    pub setting: (usize, usize),
    pub dev: Vec<Game>,
    pub test: Vec<Game>,
    pub source_subset: String,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub seed: u64,
    pub split: Split,
}

/// Listing of a suite written next to its game files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteManifest {
    pub subset: String,
    pub m: usize,
    pub n: usize,
    pub master_seed: u64,
    pub games: Vec<ManifestEntry>,
}

impl GameSuite {
    pub fn games(&self) -> impl Iterator<Item = (Split, &Game)> {
        self.dev.iter().map(|g| (Split::Dev, g)).chain(self.test.iter().map(|g| (Split::Test, g)))
    }

    pub fn split(&self, split: Split) -> &[Game] {
        match split {
            Split::Dev => &self.dev,
            Split::Test => &self.test,
        }
    }

    pub fn manifest(&self) -> SuiteManifest {
        SuiteManifest {
            subset: self.source_subset.clone(),
            m: self.setting.0,
            n: self.setting.1,
            master_seed: self.master_seed,
            games: self
                .games()
                .map(|(split, g)| ManifestEntry { id: g.id.clone(), seed: g.seed, split })
                .collect(),
        }
    }

    fn from_games(setting: (usize, usize), mut games: Vec<Game>, subset: &str, master_seed: u64) -> Self {
        let test = games.split_off(games.len() / 2);
        GameSuite { setting, dev: games, test, source_subset: subset.to_string(), master_seed }
    }
}

/// Generates `count_per_setting` games for every setting; the first half of
/// each seeded sequence becomes dev, the second half test.
pub fn generate_suite(
    d: &GroupingDataset,
    settings: &[(usize, usize)],
    count_per_setting: usize,
    master_seed: u64,
) -> Result<Vec<GameSuite>, GenerationError> {
    if !count_per_setting.is_multiple_of(2) {
        return Err(GenerationError::OddCount(count_per_setting));
    }
    settings
        .iter()
        .map(|&(m, n)| {
            check_setting(m, n)?;
            let games = (0..count_per_setting)
                .map(|i| {
                    let seed = derive_seed(master_seed, m, n, i as u64);
                    let id = format!("{}-{m}x{n}-{i:04}", d.subset_name);
                    generate_game_with_id(d, m, n, seed, id)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(GameSuite::from_games((m, n), games, &d.subset_name, master_seed))
        })
        .collect()
}

/// A source game whose groups stay together under sequential derivation.
/// Game JSON records deserialize into this shape as well.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceGame {
    pub id: String,
    pub groups: Vec<TruthGroup>,
}

impl From<&Game> for SourceGame {
    fn from(g: &Game) -> Self {
        SourceGame { id: g.id.clone(), groups: g.groups.clone() }
    }
}

/// One game per source record, keeping its four groups together and
/// sampling `n` words from each.
pub fn derive_sequential_games(
    subset: &str,
    sources: &[SourceGame],
    n: usize,
    seed: u64,
) -> Result<GameSuite, GenerationError> {
    check_setting(SOURCE_GROUPS, n)?;
    let mut games = Vec::with_capacity(sources.len());
    for (i, src) in sources.iter().enumerate() {
        let invalid = |reason: String| GenerationError::InvalidSource { id: src.id.clone(), reason };
        if src.groups.len() != SOURCE_GROUPS {
            return Err(invalid(format!("has {} groups, expected {SOURCE_GROUPS}", src.groups.len())));
        }
        if let Some(g) = src.groups.iter().find(|g| g.words.len() < n) {
            return Err(invalid(format!("group {:?} has {} words", g.topic, g.words.len())));
        }
        if !pairwise_unique(&src.groups) {
            return Err(invalid("repeated word or topic".to_string()));
        }
        let game_seed = derive_seed(seed, SOURCE_GROUPS, n, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(game_seed);
        let groups = src
            .groups
            .iter()
            .map(|g| TruthGroup { words: sample_words(&mut rng, &g.words, n), ..g.clone() })
            .collect();
        let id = format!("{subset}-{SOURCE_GROUPS}x{n}-{}", src.id);
        let game = assemble(id, subset, SOURCE_GROUPS, n, game_seed, groups, &mut rng);
        game.validate()?;
        games.push(game);
    }
    Ok(GameSuite::from_games((SOURCE_GROUPS, n), games, subset, seed))
}

/// Flattens source games into a grouping dataset, for shuffled generation
/// that samples groups independently across source games.
pub fn groupings_from_sources(subset: &str, language: &str, sources: &[SourceGame]) -> GroupingDataset {
    let groupings = sources
        .iter()
        .flat_map(|src| {
            src.groups.iter().enumerate().map(move |(gi, g)| WordGrouping {
                id: g.source_id.clone().unwrap_or_else(|| format!("{}-{gi}", src.id)),
                language: language.to_string(),
                topic: g.topic.clone(),
                topic_translation: None,
                words: g.words.clone(),
                culturally_related: g.culturally_related.unwrap_or(false),
                tags: g.tags.clone(),
            })
        })
        .collect();
    GroupingDataset::new(subset, groupings)
}
