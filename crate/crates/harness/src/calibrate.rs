//! Threshold calibration for topic achievement against human judgements.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use wordgroup_core::analysis::{calibrate_ta, default_thresholds};
use wordgroup_core::scoring::topic_similarity;
use wordgroup_core::{Calibration, TopicSimilarity};

use crate::config::Config;

/// One human judgement. Similarities are taken as given when present,
/// otherwise computed from the topics with the subset's embeddings.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annotation {
    #[serde(default)]
    pub subset: Option<String>,
    #[serde(default)]
    pub predicted_topic: Option<String>,
    #[serde(default)]
    pub matched_topic: Option<String>,
    #[serde(default)]
    pub other_topics: Vec<String>,
    #[serde(default)]
    pub similarity: Option<TopicSimilarity>,
    pub human: bool,
}

pub fn read_annotations(path: &Path) -> Result<Vec<Annotation>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let items: Vec<Annotation> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{}:{}: malformed annotation", path.display(), i + 1)))
        .collect::<Result<_>>()?;
    if items.is_empty() {
        bail!("{}: no annotations", path.display());
    }
    Ok(items)
}

fn similarities(cfg: &Config, items: &[Annotation]) -> Result<Vec<TopicSimilarity>> {
    let mut tables = std::collections::BTreeMap::new();
    items
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if let Some(s) = &a.similarity {
                return Ok(s.clone());
            }
            let (Some(subset), Some(matched)) = (&a.subset, &a.matched_topic) else {
                bail!("annotation {}: needs `similarity`, or `subset` and `matched_topic`", i + 1);
            };
            if !tables.contains_key(subset) {
                tables.insert(subset.clone(), cfg.load_embeddings(subset)?);
            }
            let others: Vec<&str> = a.other_topics.iter().map(String::as_str).collect();
            Ok(topic_similarity(a.predicted_topic.as_deref(), matched, &others, &tables[subset]))
        })
        .collect()
}

pub fn cmd_calibrate_ta(cfg: &Config, annotations: &Path, out: &Path) -> Result<Calibration> {
    let items = read_annotations(annotations)?;
    let sims = similarities(cfg, &items)?;
    let human: Vec<bool> = items.iter().map(|a| a.human).collect();
    let cal = calibrate_ta(&human, &default_thresholds::<f64>(), &sims)?;
    std::fs::create_dir_all(out)?;
    let mut w = csv::Writer::from_path(out.join("calibration.csv"))?;
    for row in &cal.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    let sidecar = serde_json::json!({
        "table": "calibration",
        "items": items.len(),
        "best_threshold": cal.best,
        "best_kappa": cal.best_kappa,
        "tie": cal.tie,
        "degenerate": cal.degenerate,
    });
    std::fs::write(out.join("calibration.json"), serde_json::to_string_pretty(&sidecar)? + "\n")?;
    Ok(cal)
}
