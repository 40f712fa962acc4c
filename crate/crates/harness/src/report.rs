//! Aggregate tables over result records, written as CSV files with JSON
//! metadata sidecars.
//!
//! Every reduction sorts its inputs first, so tables do not depend on record
//! order or evaluation parallelism.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::json;
use wordgroup_core::analysis::binning::{bin_scores, place, Placement};
use wordgroup_core::analysis::spearman;
use wordgroup_core::scalar::mean_order_insensitive;
use wordgroup_core::BinningConfig;

use crate::evaluate::SplitSelection;
use crate::records::{collect_result_files, read_records, ResultRecord};

/// Score histogram edges: `[0, 0.2] (0.2, 0.4] ... (0.8, 1]`.
pub const HISTOGRAM_EDGES: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];

/// Subset label for rows pooled over every subset.
pub const ALL_SUBSETS: &str = "all";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanRow {
    pub model: String,
    pub subset: String,
    pub m: usize,
    pub n: usize,
    pub count: usize,
    pub errors: usize,
    pub parse_failures: usize,
    pub mean_f1: Option<f64>,
    pub mean_ctd: Option<f64>,
    pub mean_ta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CulturalRow {
    pub model: String,
    pub subset: String,
    pub m: usize,
    pub n: usize,
    pub non_cultural_count: usize,
    pub cultural_count: usize,
    pub non_cultural_f1: Option<f64>,
    pub cultural_f1: Option<f64>,
    /// Non-culturally-related minus culturally-related.
    pub delta_f1: Option<f64>,
    pub non_cultural_ta: Option<f64>,
    pub cultural_ta: Option<f64>,
    pub delta_ta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TagRow {
    pub model: String,
    pub subset: String,
    pub tag: String,
    pub count: usize,
    pub mean_f1: Option<f64>,
    pub mean_ta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketRow {
    pub model: String,
    pub metric: String,
    pub bucket: String,
    pub count: usize,
    pub mean_f1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub model: String,
    pub metric: String,
    /// Mean over subsets with a defined correlation.
    pub mean_spearman: Option<f64>,
    pub subsets_used: usize,
    pub subsets_total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramRow {
    pub model: String,
    pub bucket: String,
    pub lo: f64,
    pub hi: f64,
    pub f1_count: usize,
    pub ctd_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SilhouetteRow {
    pub model: String,
    pub subset: String,
    pub game_id: String,
    pub game_f1: f64,
    pub f1_class: String,
    pub silhouette_truth: f64,
    pub silhouette_predicted: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBundle {
    pub means: Vec<MeanRow>,
    pub cultural: Vec<CulturalRow>,
    pub tags: Vec<TagRow>,
    pub buckets: Vec<BucketRow>,
    pub correlations: Vec<CorrelationRow>,
    pub histogram: Vec<HistogramRow>,
    pub silhouette: Vec<SilhouetteRow>,
    pub records: usize,
    pub duplicates_dropped: usize,
    pub errors_excluded: usize,
    /// Games whose metric fell outside the bucket edges, per metric.
    pub flagged: BTreeMap<String, Vec<String>>,
}

fn mean(values: &[f64]) -> Option<f64> {
    mean_order_insensitive(values)
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Sorts records by (model, subset, game) and drops repeated keys.
pub fn canonical_records(mut records: Vec<ResultRecord>) -> (Vec<ResultRecord>, usize) {
    let key = |r: &ResultRecord| (r.model.clone(), r.subset.clone(), r.game_id.clone());
    let mut keyed: Vec<((String, String, String), String, ResultRecord)> = records
        .drain(..)
        .map(|r| (key(&r), serde_json::to_string(&r.stable()).unwrap_or_default(), r))
        .collect();
    keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let before = keyed.len();
    keyed.dedup_by(|a, b| a.0 == b.0);
    let dropped = before - keyed.len();
    (keyed.into_iter().map(|(_, _, r)| r).collect(), dropped)
}

/// The metric families of the bucket and correlation tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Metric {
    GroupCount,
    GroupSize,
    Ari,
    Overlap,
    Integrated,
}

impl Metric {
    const ALL: [Metric; 5] = [Metric::GroupCount, Metric::GroupSize, Metric::Ari, Metric::Overlap, Metric::Integrated];

    fn name(self) -> &'static str {
        match self {
            Metric::GroupCount => "group_count",
            Metric::GroupSize => "group_size",
            Metric::Ari => "ari",
            Metric::Overlap => "word_overlap",
            Metric::Integrated => "integrated",
        }
    }

    /// Group size is studied on 4-group games, everything else on 4-word games.
    fn selects(self, r: &ResultRecord) -> bool {
        match self {
            Metric::GroupSize => r.m == 4,
            _ => r.n == 4,
        }
    }

    fn edges(self, bins: &BinningConfig) -> Option<&[f64]> {
        match self {
            Metric::Ari => Some(&bins.ari_edges),
            Metric::Overlap => Some(&bins.overlap_edges),
            Metric::Integrated => Some(&bins.integrated_edges),
            _ => None,
        }
    }

    fn value(self, r: &ResultRecord) -> Option<f64> {
        match self {
            Metric::GroupCount => Some(r.m as f64),
            Metric::GroupSize => Some(r.n as f64),
            Metric::Ari => r.profile.as_ref().map(|p| p.ari),
            Metric::Overlap => r.profile.as_ref().map(|p| p.word_overlap),
            Metric::Integrated => r.profile.as_ref().map(|p| p.integrated),
        }
    }
}

/// Per-bucket (label, ordering key, scores). Discrete metrics order buckets
/// by expected performance (fewer groups or words first is easier, so the
/// key is the negated count); binned metrics order by bin index.
fn buckets(metric: Metric, records: &[&ResultRecord], bins: &BinningConfig, flagged: &mut Vec<String>) -> Vec<(String, f64, Vec<f64>)> {
    let obs: Vec<(String, f64, f64)> = records
        .iter()
        .filter(|r| metric.selects(r))
        .filter_map(|r| metric.value(r).map(|v| (r.game_id.clone(), v, r.score.game_f1)))
        .collect();
    match metric.edges(bins) {
        None => {
            let mut by_value: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
            for (_, v, f1) in &obs {
                by_value.entry(*v as usize).or_default().push(*f1);
            }
            by_value.into_iter().map(|(v, s)| (v.to_string(), -(v as f64), s)).collect()
        }
        Some(edges) => {
            let Ok(binned) = bin_scores(&obs, edges) else { return Vec::new() };
            flagged.extend(binned.flagged);
            let mut members: Vec<Vec<f64>> = vec![Vec::new(); edges.len() - 1];
            for (_, v, f1) in &obs {
                match place(*v, edges) {
                    Placement::InRange(b) | Placement::Clamped(b) => members[b].push(*f1),
                    Placement::Invalid => {}
                }
            }
            binned.bins.into_iter().zip(members).enumerate().map(|(i, (bin, s))| (bin.label, i as f64, s)).collect()
        }
    }
}

/// Spearman correlation between bucket order and mean F1 over non-empty
/// buckets.
fn bucket_correlation(buckets: &[(String, f64, Vec<f64>)]) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = buckets.iter().filter_map(|(_, k, s)| mean(s).map(|m| (*k, m))).unzip();
    if xs.len() < 2 {
        return None;
    }
    spearman(&xs, &ys).ok().flatten()
}

pub fn build_report(records: Vec<ResultRecord>, bins: &BinningConfig) -> ReportBundle {
    let (records, duplicates_dropped) = canonical_records(records);
    let usable: Vec<&ResultRecord> = records.iter().filter(|r| r.error.is_none()).collect();
    let errors_excluded = records.len() - usable.len();
    let mut models: Vec<&str> = records.iter().map(|r| r.model.as_str()).collect();
    models.dedup();

    // Means per model, subset and setting.
    type SettingKey = (String, String, usize, usize);
    /// Per-record scores for (F1, TA).
    type Scores = (Vec<f64>, Vec<f64>);
    let mut groups: BTreeMap<SettingKey, (Vec<&ResultRecord>, usize)> = BTreeMap::new();
    for r in &records {
        let e = groups.entry((r.model.clone(), r.subset.clone(), r.m, r.n)).or_default();
        if r.error.is_some() {
            e.1 += 1;
        } else {
            e.0.push(r);
        }
    }
    let means = groups
        .iter()
        .map(|((model, subset, m, n), (rs, errors))| {
            let col = |f: &dyn Fn(&ResultRecord) -> f64| mean(&rs.iter().map(|r| f(r)).collect::<Vec<_>>());
            MeanRow {
                model: model.clone(),
                subset: subset.clone(),
                m: *m,
                n: *n,
                count: rs.len(),
                errors: *errors,
                parse_failures: rs.iter().filter(|r| r.parse_failed).count(),
                mean_f1: col(&|r| r.score.game_f1),
                mean_ctd: col(&|r| r.score.game_ctd),
                mean_ta: col(&|r| r.score.ta_rate),
            }
        })
        .collect();

    // Group-level observations: (record, truth index, f1, ta).
    let group_obs = |r: &&ResultRecord| -> Vec<(usize, f64, f64)> {
        r.score
            .matching
            .iter()
            .zip(&r.score.per_group_f1)
            .zip(&r.score.topic_achieved)
            .map(|((pair, f1), ta)| (pair.truth, *f1, flag(*ta)))
            .collect()
    };

    let mut cultural_map: BTreeMap<SettingKey, [Scores; 2]> = BTreeMap::new();
    for r in &usable {
        for (t, f1, ta) in group_obs(r) {
            let Some(c) = r.groups.get(t).and_then(|g| g.culturally_related) else { continue };
            let e = cultural_map.entry((r.model.clone(), r.subset.clone(), r.m, r.n)).or_default();
            let side = &mut e[usize::from(c)];
            side.0.push(f1);
            side.1.push(ta);
        }
    }
    let delta = |a: Option<f64>, b: Option<f64>| a.zip(b).map(|(a, b)| a - b);
    let cultural = cultural_map
        .into_iter()
        .map(|((model, subset, m, n), [non, cult])| {
            let (nf, cf, nt, ct) = (mean(&non.0), mean(&cult.0), mean(&non.1), mean(&cult.1));
            CulturalRow {
                model,
                subset,
                m,
                n,
                non_cultural_count: non.0.len(),
                cultural_count: cult.0.len(),
                non_cultural_f1: nf,
                cultural_f1: cf,
                delta_f1: delta(nf, cf),
                non_cultural_ta: nt,
                cultural_ta: ct,
                delta_ta: delta(nt, ct),
            }
        })
        .collect();

    let mut tag_map: BTreeMap<(String, String, String), Scores> = BTreeMap::new();
    for r in &usable {
        for (t, f1, ta) in group_obs(r) {
            let Some(g) = r.groups.get(t) else { continue };
            for tag in &g.tags {
                for subset in [r.subset.as_str(), ALL_SUBSETS] {
                    let e = tag_map.entry((r.model.clone(), subset.to_string(), tag.as_str().to_string())).or_default();
                    e.0.push(f1);
                    e.1.push(ta);
                }
            }
        }
    }
    let tags = tag_map
        .into_iter()
        .map(|((model, subset, tag), (f1, ta))| TagRow { model, subset, tag, count: f1.len(), mean_f1: mean(&f1), mean_ta: mean(&ta) })
        .collect();

    let mut bucket_rows = Vec::new();
    let mut correlations = Vec::new();
    let mut flagged: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for model in &models {
        let mine: Vec<&ResultRecord> = usable.iter().copied().filter(|r| r.model == *model).collect();
        let mut subsets: Vec<&str> = mine.iter().map(|r| r.subset.as_str()).collect();
        subsets.dedup();
        for metric in Metric::ALL {
            let mut metric_flags = Vec::new();
            for (label, _, scores) in buckets(metric, &mine, bins, &mut metric_flags) {
                bucket_rows.push(BucketRow {
                    model: model.to_string(),
                    metric: metric.name().into(),
                    bucket: label,
                    count: scores.len(),
                    mean_f1: mean(&scores),
                });
            }
            if !metric_flags.is_empty() {
                metric_flags.sort();
                flagged.entry(format!("{model}/{}", metric.name())).or_default().extend(metric_flags);
            }
            let rhos: Vec<f64> = subsets
                .iter()
                .filter_map(|s| {
                    let in_subset: Vec<&ResultRecord> = mine.iter().copied().filter(|r| r.subset == *s).collect();
                    bucket_correlation(&buckets(metric, &in_subset, bins, &mut Vec::new()))
                })
                .collect();
            correlations.push(CorrelationRow {
                model: model.to_string(),
                metric: metric.name().into(),
                mean_spearman: mean(&rhos),
                subsets_used: rhos.len(),
                subsets_total: subsets.len(),
            });
        }
    }

    let mut histogram = Vec::new();
    for model in &models {
        let mut f1_counts = [0usize; 5];
        let mut ctd_counts = [0usize; 5];
        for r in usable.iter().filter(|r| r.model == *model) {
            for (value, counts) in [(r.score.game_f1, &mut f1_counts), (r.score.game_ctd, &mut ctd_counts)] {
                if let Placement::InRange(b) | Placement::Clamped(b) = place(value, &HISTOGRAM_EDGES) {
                    counts[b] += 1;
                }
            }
        }
        for b in 0..5 {
            histogram.push(HistogramRow {
                model: model.to_string(),
                bucket: wordgroup_core::analysis::binning::bin_label(&HISTOGRAM_EDGES, b),
                lo: HISTOGRAM_EDGES[b],
                hi: HISTOGRAM_EDGES[b + 1],
                f1_count: f1_counts[b],
                ctd_count: ctd_counts[b],
            });
        }
    }

    let silhouette = usable
        .iter()
        .filter_map(|r| {
            let p = r.profile.as_ref()?;
            Some(SilhouetteRow {
                model: r.model.clone(),
                subset: r.subset.clone(),
                game_id: r.game_id.clone(),
                game_f1: r.score.game_f1,
                f1_class: if r.score.game_f1 <= 0.5 { "f1<=0.5" } else { "f1>0.5" }.into(),
                silhouette_truth: p.silhouette_truth,
                silhouette_predicted: p.silhouette_predicted,
            })
        })
        .collect();

    ReportBundle {
        means,
        cultural,
        tags,
        buckets: bucket_rows,
        correlations,
        histogram,
        silhouette,
        records: records.len(),
        duplicates_dropped,
        errors_excluded,
        flagged,
    }
}

fn write_table<T: Serialize>(dir: &Path, name: &str, description: &str, rows: &[T], meta: &serde_json::Value) -> Result<()> {
    let mut w = csv::Writer::from_path(dir.join(format!("{name}.csv")))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    let sidecar = json!({
        "table": name,
        "description": description,
        "rows": rows.len(),
        "meta": meta,
    });
    std::fs::write(dir.join(format!("{name}.json")), serde_json::to_string_pretty(&sidecar)? + "\n")?;
    Ok(())
}

/// Writes every table as `<name>.csv` plus `<name>.json` metadata.
pub fn write_report(bundle: &ReportBundle, dir: &Path, inputs: &[PathBuf], bins: &BinningConfig) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let inputs: Vec<String> = inputs.iter().map(|p| p.display().to_string()).collect();
    let meta = json!({
        "inputs": inputs,
        "records": bundle.records,
        "duplicates_dropped": bundle.duplicates_dropped,
        "errors_excluded": bundle.errors_excluded,
        "means": "unweighted arithmetic means over games; counts given for re-weighting",
    });
    write_table(dir, "means", "Mean game F1, CTD and TA rate per model, subset and setting", &bundle.means, &meta)?;
    write_table(
        dir,
        "cultural",
        "Group-level F1 and TA for non-culturally-related and culturally-related groups; delta = non-cultural - cultural",
        &bundle.cultural,
        &meta,
    )?;
    write_table(dir, "tags", "Group-level F1 and TA per grouping tag", &bundle.tags, &meta)?;
    let mut bucket_meta = meta.clone();
    bucket_meta["bins"] = serde_json::to_value(bins)?;
    bucket_meta["flagged"] = serde_json::to_value(&bundle.flagged)?;
    bucket_meta["selection"] = json!("group_size over 4-group games; other metrics over 4-word games");
    write_table(dir, "buckets", "Mean game F1 per difficulty bucket", &bundle.buckets, &bucket_meta)?;
    let mut corr_meta = bucket_meta.clone();
    corr_meta["direction"] = json!(
        "group_count and group_size: buckets ranked by expected performance (fewer is easier); binned metrics: bucket order; correlated with mean F1 per bucket"
    );
    write_table(dir, "correlations", "Spearman correlation of bucket ranking and mean F1, averaged over subsets", &bundle.correlations, &corr_meta)?;
    let mut hist_meta = meta.clone();
    hist_meta["edges"] = json!(HISTOGRAM_EDGES);
    write_table(dir, "histogram", "Distribution of game F1 and CTD scores", &bundle.histogram, &hist_meta)?;
    write_table(dir, "silhouette", "Truth and predicted silhouette per game, split by F1", &bundle.silhouette, &meta)?;
    Ok(())
}

pub fn cmd_report(paths: &[PathBuf], out: &Path, split: SplitSelection, bins: &BinningConfig) -> Result<ReportBundle> {
    let files = collect_result_files(paths)?;
    if files.is_empty() {
        bail!("no result files found");
    }
    let mut records = Vec::new();
    for f in &files {
        records.extend(read_records(f)?.into_iter().filter(|r| split.includes(r.split)));
    }
    if records.is_empty() {
        bail!("no result records in the selected split");
    }
    let bundle = build_report(records, bins);
    write_report(&bundle, out, &files, bins)?;
    Ok(bundle)
}
