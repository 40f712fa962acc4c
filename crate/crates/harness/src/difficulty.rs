//! Difficulty profiles merged into result records.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use wordgroup_core::analysis::{
    game_ari, integrated_difficulty, predicted_silhouette, truth_silhouette, word_overlap, Proposals,
};
use wordgroup_core::scoring::prepare_predictions;
use wordgroup_core::{DifficultyProfile, Embeddings, Game};
use wordgroup_llm::{backend_for, probe_overlap, EmbeddingProber, GameRegistry, ModelClient, ResponseCache};

use crate::config::{Config, ProbeSpec};
use crate::records::{read_records, rewrite_records, ResultRecord};
use crate::suite::load_subset;

/// Per-game part of a profile; the predicted silhouette is per record.
#[derive(Debug, Clone)]
struct GameDifficulty {
    profile: DifficultyProfile,
    proposals: Proposals,
}

enum Prober<'a> {
    Model(Box<ModelClient>),
    Embedding(EmbeddingProber<'a, f64>),
}

impl Prober<'_> {
    fn proposals(&self, game: &Game) -> Result<Proposals, String> {
        match self {
            Prober::Model(c) => probe_overlap(c, game).map(|o| o.proposals).map_err(|e| e.to_string()),
            Prober::Embedding(p) => Ok(p.probe(game)),
        }
    }
}

fn game_difficulty(cfg: &Config, game: &Game, table: &Embeddings, prober: &Prober) -> Result<GameDifficulty, String> {
    let ari = game_ari(game, table, cfg.kmeans_seed).map_err(|e| format!("ari: {e}"))?;
    let silhouette_truth = truth_silhouette(game, table).map_err(|e| format!("silhouette: {e}"))?;
    let proposals = prober.proposals(game).map_err(|e| format!("probe: {e}"))?;
    let overlap: f64 = word_overlap(&proposals, &game.topics(), cfg.overlap_mode).map_err(|e| format!("overlap: {e}"))?;
    let integrated =
        integrated_difficulty(game.m, ari, overlap, &cfg.weights).map_err(|e| format!("integrated: {e}"))?;
    Ok(GameDifficulty {
        profile: DifficultyProfile {
            group_count: game.m,
            group_size: game.n,
            ari,
            silhouette_truth,
            silhouette_predicted: None,
            word_overlap: overlap,
            integrated,
        },
        proposals,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DifficultySummary {
    pub files: Vec<PathBuf>,
    pub profiled: usize,
    pub failed: usize,
}

/// Computes profiles for every record in `files` and rewrites the files
/// with the profiles merged in.
pub fn cmd_difficulty(cfg: &Config, files: &[PathBuf]) -> Result<DifficultySummary> {
    let mut per_file: Vec<(PathBuf, Vec<ResultRecord>)> = Vec::new();
    for f in files {
        per_file.push((f.clone(), read_records(f)?));
    }
    let mut subsets: Vec<String> = per_file.iter().flat_map(|(_, rs)| rs.iter().map(|r| r.subset.clone())).collect();
    subsets.sort();
    subsets.dedup();

    let mut profiles: HashMap<(String, String), Result<GameDifficulty, String>> = HashMap::new();
    let mut tables: BTreeMap<String, Embeddings> = BTreeMap::new();
    let mut games: HashMap<(String, String), Game> = HashMap::new();
    for subset in &subsets {
        let table = cfg.load_embeddings(subset)?;
        let suite: Vec<Game> = load_subset(&cfg.suite_dir, subset)?.into_iter().map(|(_, g)| g).collect();
        let prober = match cfg.probe {
            ProbeSpec::Embedding { threshold } => Prober::Embedding(EmbeddingProber::new(&table, threshold)),
            ProbeSpec::Model => {
                let name = cfg.probe_model.as_deref().context("probe_model: required when probe.kind is \"model\"")?;
                let mc = cfg.model(name)?;
                let registry = Arc::new(GameRegistry::new(&suite));
                let cache = ResponseCache::new(cfg.cache_dir.join(name))?;
                Prober::Model(Box::new(ModelClient::new(name, mc.clone(), backend_for(mc, &registry)).with_cache(cache)))
            }
        };
        let wanted: std::collections::HashSet<&str> = per_file
            .iter()
            .flat_map(|(_, rs)| rs.iter().filter(|r| &r.subset == subset).map(|r| r.game_id.as_str()))
            .collect();
        let needed: Vec<&Game> = suite.iter().filter(|g| wanted.contains(g.id.as_str())).collect();
        let computed: Vec<(String, Result<GameDifficulty, String>)> =
            needed.par_iter().map(|g| (g.id.clone(), game_difficulty(cfg, g, &table, &prober))).collect();
        for (id, d) in computed {
            profiles.insert((subset.clone(), id), d);
        }
        for g in suite {
            games.insert((subset.clone(), g.id.clone()), g);
        }
        drop(prober);
        tables.insert(subset.clone(), table);
    }

    let mut summary = DifficultySummary::default();
    for (path, mut records) in per_file {
        for r in &mut records {
            let key = (r.subset.clone(), r.game_id.clone());
            match profiles.get(&key) {
                Some(Ok(d)) => {
                    let game = &games[&key];
                    let predicted: Vec<Vec<String>> = prepare_predictions(&r.answer, game.m, cfg.scoring.truncate_to_n)
                        .into_iter()
                        .map(|(_, w)| w)
                        .collect();
                    let mut profile = d.profile.clone();
                    profile.silhouette_predicted = predicted_silhouette(game, &tables[&r.subset], &predicted);
                    r.profile = Some(profile);
                    r.proposals = Some(d.proposals.clone());
                    r.difficulty_error = None;
                    summary.profiled += 1;
                }
                Some(Err(e)) => {
                    r.profile = None;
                    r.difficulty_error = Some(e.clone());
                    summary.failed += 1;
                }
                None => {
                    r.difficulty_error = Some(format!("game {} not found in suite", r.game_id));
                    summary.failed += 1;
                }
            }
        }
        rewrite_records(&path, &records)?;
        summary.files.push(path);
    }
    Ok(summary)
}
