#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tempfile::TempDir;
use wordgroup_core::gamegen::Split;
use wordgroup_core::scoring::{GameScore, MatchPair};
use wordgroup_core::{DifficultyProfile, ParsedAnswer};
use wordgroup_harness::records::{GroupMeta, ResultRecord};
use wordgroup_harness::Config;

pub struct Fixture {
    pub dir: TempDir,
    pub config_path: PathBuf,
}

impl Fixture {
    pub fn config(&self) -> Config {
        Config::load(&self.config_path).unwrap()
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.dir.path().join(rel)
    }
}

pub fn topic(subset: &str, g: usize) -> String {
    format!("{subset}topic{g}")
}

pub fn word(subset: &str, g: usize, j: usize) -> String {
    format!("{subset}w{g}x{j}")
}

/// `groupings` groupings of 4 words per subset. Each grouping owns one
/// embedding axis: its topic sits on the axis and its words near it.
pub fn write_dataset(dir: &Path, subset: &str, groupings: usize, seed: u64) {
    let mut lines = String::new();
    for g in 0..groupings {
        let tag = ["general_knowledge", "cultural_pop_culture", "linguistic"][g % 3];
        let rec = json!({
            "id": format!("{subset}-{g}"),
            "language": subset,
            "topic": topic(subset, g),
            "words": (0..4).map(|j| word(subset, g, j)).collect::<Vec<_>>(),
            "culturally_related": g % 2 == 0,
            "tags": [tag],
        });
        writeln!(lines, "{rec}").unwrap();
    }
    std::fs::create_dir_all(dir.join("data")).unwrap();
    std::fs::write(dir.join("data").join(format!("{subset}.jsonl")), lines).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vecs = String::new();
    let axis = |g: usize, rng: &mut ChaCha8Rng, noise: f64| -> String {
        (0..groupings)
            .map(|d| {
                let base = if d == g { 1.0 } else { 0.0 };
                format!("{:.6}", base + noise * (rng.random::<f64>() - 0.5))
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    for g in 0..groupings {
        writeln!(vecs, "{} {}", topic(subset, g), axis(g, &mut rng, 0.0)).unwrap();
        for j in 0..4 {
            writeln!(vecs, "{} {}", word(subset, g, j), axis(g, &mut rng, 0.05)).unwrap();
        }
    }
    std::fs::create_dir_all(dir.join("emb")).unwrap();
    std::fs::write(
        dir.join("emb").join(format!("{subset}.vec")),
        format!("{} {}\n{vecs}", groupings * 5, groupings),
    )
    .unwrap();
}

pub fn models() -> Value {
    json!({
        "echo": {"kind": "truth-echo", "model": "echo", "parallelism": 4},
        "random": {"kind": "random-groups", "model": "random", "mock_seed": 7, "parallelism": 3},
        "prose": {"kind": "canned", "model": "prose", "canned_text": "I am not sure about these words."},
        "repair": {"kind": "canned", "model": "repair", "canned_text": "Still no idea."}
    })
}

pub fn fixture(subsets: &[&str], settings: &[(usize, usize)], count: usize, extra: Value) -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let mut datasets = serde_json::Map::new();
    let mut embeddings = serde_json::Map::new();
    for (i, s) in subsets.iter().enumerate() {
        write_dataset(dir.path(), s, 12, i as u64 + 1);
        datasets.insert(s.to_string(), json!(format!("data/{s}.jsonl")));
        embeddings.insert(s.to_string(), json!({"path": format!("emb/{s}.vec")}));
    }
    let mut cfg = json!({
        "datasets": datasets,
        "embeddings": embeddings,
        "models": models(),
        "repair_model": "repair",
        "probe_model": "echo",
        "settings": settings,
        "count": count,
        "master_seed": 2024,
        "chunk_size": 4,
    });
    if let Value::Object(extra) = extra {
        for (k, v) in extra {
            cfg[k] = v;
        }
    }
    let config_path = dir.path().join("wordgroup.json");
    std::fs::write(&config_path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    Fixture { dir, config_path }
}

/// A hand-made record with uniform per-group scores.
pub fn synthetic_record(
    model: &str,
    subset: &str,
    id: &str,
    (m, n): (usize, usize),
    f1: f64,
    ctd: f64,
    profile: Option<(f64, f64, f64)>,
) -> ResultRecord {
    let score = GameScore {
        matching: (0..m).map(|t| MatchPair { truth: t, predicted: Some(t) }).collect(),
        trace: Vec::new(),
        per_group_f1: vec![f1; m],
        game_f1: f1,
        game_ctd: ctd,
        topic_achieved: vec![f1 == 1.0; m],
        ta_rate: if f1 == 1.0 { 1.0 } else { 0.0 },
        predicted_considered: m,
        multi_block: false,
    };
    let t: DateTime<Utc> = DateTime::UNIX_EPOCH;
    ResultRecord {
        game_id: id.into(),
        subset: subset.into(),
        m,
        n,
        split: Split::Test,
        model: model.into(),
        response: None,
        repair: None,
        answer: ParsedAnswer::empty(""),
        score,
        parse_failed: false,
        error: None,
        groups: (0..m)
            .map(|g| GroupMeta { topic: format!("T{g}"), culturally_related: Some(g % 2 == 0), tags: Vec::new() })
            .collect(),
        profile: profile.map(|(ari, overlap, integrated)| DifficultyProfile {
            group_count: m,
            group_size: n,
            ari,
            silhouette_truth: 0.0,
            silhouette_predicted: None,
            word_overlap: overlap,
            integrated,
        }),
        proposals: None,
        difficulty_error: None,
        started_at: t,
        finished_at: t,
    }
}
