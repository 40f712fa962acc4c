//! Result records: one JSON line per evaluated game and model.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use wordgroup_core::analysis::Proposals;
use wordgroup_core::gamegen::Split;
use wordgroup_core::{DifficultyProfile, Game, GameScore, ParsedAnswer, ScoringConfig, Tag};
use wordgroup_llm::{ModelConfig, RawResponse};

/// Reporting metadata of one truth group, in game order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMeta {
    pub topic: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub culturally_related: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<Tag>,
}

impl GroupMeta {
    pub fn of(game: &Game) -> Vec<Self> {
        game.groups
            .iter()
            .map(|g| GroupMeta { topic: g.topic.clone(), culturally_related: g.culturally_related, tags: g.tags.clone() })
            .collect()
    }
}

/// Pointer to a cached response file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseRef {
    pub fingerprint: String,
    pub latency_ms: u64,
    pub attempts: u32,
    pub cache_hit: bool,
}

impl ResponseRef {
    pub fn new(r: &RawResponse, cache_hit: bool) -> Self {
        Self { fingerprint: r.fingerprint.clone(), latency_ms: r.latency_ms, attempts: r.attempts, cache_hit }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub game_id: String,
    pub subset: String,
    pub m: usize,
    pub n: usize,
    pub split: Split,
    pub model: String,
    pub response: Option<ResponseRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repair: Option<ResponseRef>,
    pub answer: ParsedAnswer,
    pub score: GameScore,
    /// No groups could be recovered, even after repair; scored zero.
    #[serde(default)]
    pub parse_failed: bool,
    /// Query or repair failure; the record is excluded from means.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub groups: Vec<GroupMeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<DifficultyProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proposals: Option<Proposals>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difficulty_error: Option<String>,
    pub started_at: DateTime<Utc>,
    pub finished_at: DateTime<Utc>,
}

impl ResultRecord {
    /// The record with run-dependent fields (timestamps, latency, cache
    /// hits) cleared, for comparing runs.
    pub fn stable(&self) -> Self {
        let mut r = self.clone();
        let epoch = DateTime::<Utc>::UNIX_EPOCH;
        r.started_at = epoch;
        r.finished_at = epoch;
        for resp in [&mut r.response, &mut r.repair].into_iter().flatten() {
            resp.latency_ms = 0;
            resp.cache_hit = false;
        }
        r
    }
}

/// Reads records, keeping the last one per game id. Blank lines are skipped.
pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut by_id: BTreeMap<String, (usize, ResultRecord)> = BTreeMap::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ResultRecord =
            serde_json::from_str(&line).with_context(|| format!("{}:{}: bad record", path.display(), i + 1))?;
        by_id.insert(rec.game_id.clone(), (i, rec));
    }
    let mut recs: Vec<(usize, ResultRecord)> = by_id.into_values().collect();
    recs.sort_by_key(|(i, _)| *i);
    Ok(recs.into_iter().map(|(_, r)| r).collect())
}

pub fn append_records(path: &Path, records: &[ResultRecord]) -> Result<()> {
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(r)?);
        buf.push('\n');
    }
    file.write_all(buf.as_bytes())?;
    file.sync_data()?;
    Ok(())
}

/// Replaces the file contents through a temporary file and rename.
pub fn rewrite_records(path: &Path, records: &[ResultRecord]) -> Result<()> {
    let tmp = path.with_extension("jsonl.tmp");
    let _ = std::fs::remove_file(&tmp);
    append_records(&tmp, records)?;
    std::fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))
}

/// Summary of one evaluation invocation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunEntry {
    pub started_at: Option<DateTime<Utc>>,
    pub finished_at: Option<DateTime<Utc>>,
    pub evaluated: usize,
    pub skipped: usize,
    pub cache_hits: usize,
    pub errors: usize,
    pub parse_failures: usize,
}

/// Header file kept next to a results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub model: String,
    pub model_config: ModelConfig,
    pub repair_model: Option<String>,
    pub subset: String,
    pub split: String,
    pub scoring: ScoringConfig,
    pub runs: Vec<RunEntry>,
}

pub fn manifest_path(results: &Path) -> PathBuf {
    results.with_extension("manifest.json")
}

pub fn read_manifest(results: &Path) -> Option<RunManifest> {
    let text = std::fs::read_to_string(manifest_path(results)).ok()?;
    serde_json::from_str(&text).ok()
}

pub fn write_manifest(results: &Path, m: &RunManifest) -> Result<()> {
    std::fs::write(manifest_path(results), serde_json::to_string_pretty(m)? + "\n")?;
    Ok(())
}

/// Results files under `paths`: files as given, directories searched
/// recursively for `*.jsonl`. Sorted and deduplicated.
pub fn collect_result_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
        for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
            let p = entry?.path();
            if p.is_dir() {
                walk(&p, out)?;
            } else if p.extension().is_some_and(|e| e == "jsonl") {
                out.push(p);
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            walk(p, &mut out)?;
        } else if p.exists() {
            out.push(p.clone());
        } else {
            anyhow::bail!("results path not found: {}", p.display());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}
