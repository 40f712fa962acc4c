//! Resumable, parallel evaluation of one model over generated suites.

use std::collections::HashSet;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use chrono::Utc;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wordgroup_core::gamegen::Split;
use wordgroup_core::scoring::score_game;
use wordgroup_core::{Embeddings, Game, ParsedAnswer, ScoringConfig};
use wordgroup_llm::{backend_for, build_prompt, parse_or_repair, GameRegistry, ModelClient, ResponseCache};

use crate::config::Config;
use crate::records::{
    append_records, read_manifest, read_records, write_manifest, GroupMeta, ResponseRef, ResultRecord, RunEntry,
    RunManifest,
};
use crate::suite::{load_subset, suite_subsets};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SplitSelection {
    Dev,
    #[default]
    Test,
    All,
}

impl SplitSelection {
    pub fn includes(self, split: Split) -> bool {
        match self {
            SplitSelection::All => true,
            SplitSelection::Dev => split == Split::Dev,
            SplitSelection::Test => split == Split::Test,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SplitSelection::Dev => "dev",
            SplitSelection::Test => "test",
            SplitSelection::All => "all",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    pub model: String,
    /// Empty means every subset with a suite.
    pub subsets: Vec<String>,
    pub split: SplitSelection,
    /// Stop after evaluating this many new games per subset.
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EvalSummary {
    pub files: Vec<PathBuf>,
    pub evaluated: usize,
    pub skipped: usize,
    pub cache_hits: usize,
    pub errors: usize,
    pub parse_failures: usize,
}

pub fn results_path(cfg: &Config, model: &str, subset: &str, split: SplitSelection) -> PathBuf {
    cfg.results_dir.join(model).join(format!("{subset}.{}.jsonl", split.name()))
}

fn client_for(cfg: &Config, name: &str, registry: &Arc<GameRegistry>) -> Result<ModelClient> {
    let mc = cfg.model(name)?;
    let cache = ResponseCache::new(cfg.cache_dir.join(name))?;
    Ok(ModelClient::new(name, mc.clone(), backend_for(mc, registry)).with_cache(cache))
}

/// Scores one game; query and repair failures are recorded, not returned.
pub fn evaluate_game(
    game: &Game,
    split: Split,
    client: &ModelClient,
    repair: Option<&ModelClient>,
    table: &Embeddings,
    scoring: &ScoringConfig,
) -> ResultRecord {
    let started_at = Utc::now();
    let mut response = None;
    let mut repair_ref = None;
    let mut error = None;
    let mut parse_failed = false;
    let answer = match client.query(&game.id, &build_prompt(game), "") {
        Ok((raw, hit)) => {
            response = Some(ResponseRef::new(&raw, hit));
            match parse_or_repair(&raw.text, &game.id, repair) {
                Ok(r) => {
                    repair_ref = r.repair_response.as_ref().map(|resp| ResponseRef::new(resp, false));
                    parse_failed = r.failed;
                    r.answer
                }
                Err(e) => {
                    error = Some(format!("repair: {e}"));
                    ParsedAnswer::empty(raw.text)
                }
            }
        }
        Err(e) => {
            error = Some(format!("query: {e}"));
            ParsedAnswer::empty("")
        }
    };
    let score = score_game(game, &answer, table, scoring);
    ResultRecord {
        game_id: game.id.clone(),
        subset: game.subset.clone(),
        m: game.m,
        n: game.n,
        split,
        model: client.name.clone(),
        response,
        repair: repair_ref,
        answer,
        score,
        parse_failed,
        error,
        groups: GroupMeta::of(game),
        profile: None,
        proposals: None,
        difficulty_error: None,
        started_at,
        finished_at: Utc::now(),
    }
}

/// Evaluates every selected game without a finished record, appending
/// results in chunks. Games that already have an error-free record are
/// skipped, so an interrupted run resumes where it stopped.
pub fn cmd_evaluate(cfg: &Config, opts: &EvalOptions) -> Result<EvalSummary> {
    let model_cfg = cfg.model(&opts.model)?;
    let subsets = if opts.subsets.is_empty() { suite_subsets(&cfg.suite_dir)? } else { opts.subsets.clone() };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(model_cfg.parallelism.max(1))
        .build()
        .context("building worker pool")?;
    let mut summary = EvalSummary::default();

    for subset in &subsets {
        let games: Vec<(Split, Game)> =
            load_subset(&cfg.suite_dir, subset)?.into_iter().filter(|(s, _)| opts.split.includes(*s)).collect();
        let table = cfg.load_embeddings(subset)?;
        let registry = Arc::new(GameRegistry::new(games.iter().map(|(_, g)| g)));
        let client = client_for(cfg, &opts.model, &registry)?;
        let repair = cfg.repair_model.as_deref().map(|name| client_for(cfg, name, &registry)).transpose()?;

        let out = results_path(cfg, &opts.model, subset, opts.split);
        std::fs::create_dir_all(out.parent().expect("results path has a parent"))?;
        let done: HashSet<String> = if out.exists() {
            read_records(&out)?.into_iter().filter(|r| r.error.is_none()).map(|r| r.game_id).collect()
        } else {
            HashSet::new()
        };
        let mut manifest = read_manifest(&out).unwrap_or_else(|| RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            model: opts.model.clone(),
            model_config: model_cfg.clone(),
            repair_model: cfg.repair_model.clone(),
            subset: subset.clone(),
            split: opts.split.name().to_string(),
            scoring: cfg.scoring.clone(),
            runs: Vec::new(),
        });
        let mut run = RunEntry { started_at: Some(Utc::now()), ..RunEntry::default() };

        let todo: Vec<&(Split, Game)> = games.iter().filter(|(_, g)| !done.contains(&g.id)).collect();
        run.skipped = games.len() - todo.len();
        let todo = &todo[..opts.limit.map_or(todo.len(), |l| l.min(todo.len()))];
        for chunk in todo.chunks(cfg.chunk_size) {
            let records: Vec<ResultRecord> = pool.install(|| {
                chunk
                    .par_iter()
                    .map(|(split, game)| evaluate_game(game, *split, &client, repair.as_ref(), &table, &cfg.scoring))
                    .collect()
            });
            append_records(&out, &records)?;
            for r in &records {
                run.evaluated += 1;
                run.cache_hits += usize::from(r.response.as_ref().is_some_and(|x| x.cache_hit));
                run.errors += usize::from(r.error.is_some());
                run.parse_failures += usize::from(r.parse_failed);
            }
        }
        run.finished_at = Some(Utc::now());
        summary.evaluated += run.evaluated;
        summary.skipped += run.skipped;
        summary.cache_hits += run.cache_hits;
        summary.errors += run.errors;
        summary.parse_failures += run.parse_failures;
        manifest.runs.push(run);
        write_manifest(&out, &manifest)?;
        summary.files.push(out);
    }
    Ok(summary)
}
