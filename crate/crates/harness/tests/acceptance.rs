//! Acceptance criteria, one test each. Every test writes a single
//! `[PASS]`/`[FAIL]` line straight to stderr so the verdicts show up in the
//! test log even when output capture is on.

mod common;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{fixture, synthetic_record};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;
use wordgroup_core::analysis::binning::place;
use wordgroup_core::analysis::{
    adjusted_rand_index, calibrate_ta, default_thresholds, integrated_difficulty, randolph_kappa, spearman, Placement,
};
use wordgroup_core::embeddings::EmbeddingTable;
use wordgroup_core::scoring::{game_ctd, group_f1, match_groups, topic_similarity, TopicSimilarity};
use wordgroup_core::{all_settings, BinningConfig, DifficultyWeights, Game};
use wordgroup_harness::calibrate::cmd_calibrate_ta;
use wordgroup_harness::difficulty::cmd_difficulty;
use wordgroup_harness::records::{read_records, ResultRecord};
use wordgroup_harness::suite::{cmd_generate, load_subset};
use wordgroup_harness::{build_report, cmd_evaluate, cmd_report, EvalOptions, SplitSelection};
use wordgroup_llm::mock::ScriptedBackend;
use wordgroup_llm::{parse_answer, parse_or_repair, BackendKind, ModelClient, ModelConfig};

#[allow(clippy::explicit_write)]
fn criterion(name: &str, budget: Option<Duration>, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let over = budget.filter(|b| elapsed > *b);
    let verdict = match (&outcome, over) {
        (Ok(()), None) => format!("[PASS] {name} ({:.2}s)", elapsed.as_secs_f64()),
        (Ok(()), Some(b)) => format!("[FAIL] {name}: took {:.2}s, budget {:.0}s", elapsed.as_secs_f64(), b.as_secs_f64()),
        (Err(e), _) => {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            format!("[FAIL] {name}: {}", msg.unwrap_or_default())
        }
    };
    writeln!(std::io::stderr(), "{verdict}").unwrap();
    if let Err(e) = outcome {
        std::panic::resume_unwind(e);
    }
    assert!(over.is_none(), "{verdict}");
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn opts(model: &str, split: SplitSelection) -> EvalOptions {
    EvalOptions { model: model.into(), subsets: Vec::new(), split, limit: None }
}

fn tree_bytes(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().display().to_string(), std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn check_game(g: &Game) {
    assert_eq!(g.pool.len(), g.m * g.n, "{}", g.id);
    let pool: HashSet<&String> = g.pool.iter().collect();
    assert_eq!(pool.len(), g.pool.len(), "{}: repeated pool word", g.id);
    let topics: HashSet<String> = g.groups.iter().map(|t| t.topic.to_lowercase()).collect();
    assert_eq!(topics.len(), g.m, "{}: repeated topic", g.id);
    let union: HashSet<&String> = g.groups.iter().flat_map(|t| &t.words).collect();
    assert_eq!(union, pool, "{}: pool differs from union of groups", g.id);
    assert!(g.groups.iter().all(|t| t.words.len() == g.n), "{}", g.id);
}

#[test]
fn generation_invariants() {
    criterion("generation invariants", secs(10), || {
        let fx = fixture(&["en"], &all_settings(), 112, json!({}));
        let cfg = fx.config();
        let s = cmd_generate(&cfg).unwrap();
        assert_eq!(s.games, 9 * 112);
        let games = load_subset(&cfg.suite_dir, "en").unwrap();
        assert!(games.len() >= 1000);
        let settings: HashSet<(usize, usize)> = games.iter().map(|(_, g)| (g.m, g.n)).collect();
        assert_eq!(settings.len(), 9);
        games.iter().for_each(|(_, g)| check_game(g));

        let first = tree_bytes(&cfg.suite_dir);
        let mut again = cfg.clone();
        again.suite_dir = fx.path("suites-again");
        cmd_generate(&again).unwrap();
        assert_eq!(tree_bytes(&again.suite_dir), first, "reruns differ");
    });
}

fn inter(a: &[String], b: &[String]) -> usize {
    a.iter().filter(|w| b.contains(w)).count()
}

/// Step-by-step greedy: each step takes the largest remaining intersection,
/// ties to the lower truth index, then the lower predicted index.
fn greedy_trace(pred: &[Vec<String>], truth: &[Vec<String>]) -> Vec<(usize, usize, usize)> {
    let mut free_t: Vec<usize> = (0..truth.len()).collect();
    let mut free_p: Vec<usize> = (0..pred.len()).collect();
    let mut steps = Vec::new();
    while !free_t.is_empty() && !free_p.is_empty() {
        let mut cands: Vec<(usize, usize, usize)> =
            free_t.iter().flat_map(|&t| free_p.iter().map(move |&p| (t, p))).map(|(t, p)| (inter(&truth[t], &pred[p]), t, p)).collect();
        cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let (k, t, p) = cands[0];
        steps.push((k, t, p));
        free_t.retain(|x| *x != t);
        free_p.retain(|x| *x != p);
    }
    steps
}

fn permutations(items: Vec<usize>) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.clone();
        let head = rest.remove(i);
        for mut tail in permutations(rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn f1_of_assignment(pred: &[Vec<String>], truth: &[Vec<String>], assign: &[usize]) -> f64 {
    assign.iter().enumerate().map(|(t, p)| group_f1::<f64>(&truth[t], Some(&pred[*p]))).sum::<f64>() / truth.len() as f64
}

fn random_4x4(rng: &mut ChaCha8Rng) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let pool: Vec<String> = (0..16).map(|i| format!("w{i}")).collect();
    let truth: Vec<Vec<String>> = pool.chunks(4).map(<[String]>::to_vec).collect();
    let mut words = pool;
    words.shuffle(rng);
    (words.chunks(4).map(<[String]>::to_vec).collect(), truth)
}

#[test]
fn matching_oracle() {
    criterion("matching oracle", secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let perms = permutations((0..4).collect());
        for i in 0..1000 {
            let (mut pred, truth) = random_4x4(&mut rng);
            let permuted_truth = i % 4 == 0;
            if permuted_truth {
                pred = truth.clone();
                pred.shuffle(&mut rng);
                pred.iter_mut().for_each(|g| g.shuffle(&mut rng));
            }
            let m = match_groups(&pred, &truth);
            let trace: Vec<(usize, usize, usize)> = m.trace.iter().map(|s| (s.intersection, s.truth, s.predicted)).collect();
            assert_eq!(trace, greedy_trace(&pred, &truth), "instance {i}");

            let greedy: Vec<usize> = m.pairs.iter().map(|p| p.predicted.unwrap()).collect();
            let greedy_f1 = f1_of_assignment(&pred, &truth, &greedy);
            let best = perms.iter().map(|a| f1_of_assignment(&pred, &truth, a)).fold(f64::MIN, f64::max);
            assert!(greedy_f1 <= best + 1e-12, "instance {i}");
            if permuted_truth {
                assert_eq!(greedy_f1, best);
                assert_eq!(greedy_f1, 1.0);
            }
        }
    });
}

#[test]
fn metric_identities() {
    criterion("metric identities", None, || {
        let w = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let truth = w(&["a", "b", "c", "d"]);
        assert_eq!(group_f1::<f64>(&truth, Some(&w(&["a", "b", "c", "x"]))), 0.75);
        assert_eq!(group_f1::<f64>(&w(&["a", "b", "c", "x"]), Some(&truth)), 0.75);
        let f = group_f1::<f64>(&truth, Some(&w(&["a", "b", "x", "y", "z"])));
        assert!((f - 4.0 / 9.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10_000 {
            let (mut pred, truth) = random_4x4(&mut rng);
            let k = rng.random_range(0..=4);
            for (t, slot) in truth.iter().zip(pred.iter_mut()).take(k) {
                *slot = t.clone();
            }
            let m = match_groups(&pred, &truth);
            let f1 = m.pairs.iter().map(|p| group_f1::<f64>(&truth[p.truth], p.predicted.map(|i| pred[i].as_slice()))).sum::<f64>() / 4.0;
            let ctd: f64 = game_ctd(&m, &truth, &pred);
            assert!(ctd <= f1 + 1e-12, "ctd {ctd} > f1 {f1}");
        }

        let ta = |matched: f64, others: &[f64]| TopicSimilarity { matched: Some(matched), others: others.to_vec() }.achieved(0.3);
        assert!(ta(0.3, &[0.0]));
        assert!(!ta(0.3 - 1e-9, &[0.0]));
        assert!(!ta(0.6, &[0.6]), "ties with another topic are not achievements");
        assert!(!ta(0.6, &[0.2, 0.7]));
        assert!(ta(0.6, &[0.2, 0.59]));

        // Cosine through real phrase vectors: 0.3 exactly on the threshold.
        let c = 0.3f64;
        let s = (1.0 - c * c).sqrt();
        let table = EmbeddingTable::from_entries(
            "en",
            vec![
                ("guess".to_string(), vec![c, s, 0.0]),
                ("alpha".to_string(), vec![1.0, 0.0, 0.0]),
                ("beta".to_string(), vec![0.0, 0.0, 1.0]),
            ],
        )
        .unwrap();
        let sim = topic_similarity(Some("guess"), "alpha", &["beta"], &table);
        assert!((sim.matched.unwrap() - 0.3).abs() < 1e-12);
        assert!(sim.achieved(0.3 - 1e-9) && !sim.achieved(0.3 + 1e-9));
        assert!(!topic_similarity(Some("guess"), "beta", &["alpha"], &table).achieved(0.3));
    });
}

fn comb2(x: u64) -> f64 {
    (x * x.saturating_sub(1) / 2) as f64
}

/// Adjusted index from a contingency table built here by hand.
fn ari_by_contingency(a: &[usize], b: &[usize]) -> f64 {
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (x, y) in a.iter().zip(b) {
        *table.entry((*x, *y)).or_default() += 1;
        *rows.entry(*x).or_default() += 1;
        *cols.entry(*y).or_default() += 1;
    }
    let index: f64 = table.values().map(|v| comb2(*v)).sum();
    let sa: f64 = rows.values().map(|v| comb2(*v)).sum();
    let sb: f64 = cols.values().map(|v| comb2(*v)).sum();
    let expected = sa * sb / comb2(a.len() as u64);
    let max = (sa + sb) / 2.0;
    if max == expected {
        1.0
    } else {
        (index - expected) / (max - expected)
    }
}

#[test]
fn ari_suite() {
    criterion("ari suite", secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let truth: Vec<usize> = (0..16).map(|i| i / 4).collect();
        assert_eq!(adjusted_rand_index::<f64, _, _>(&truth, &truth).unwrap(), 1.0);
        let renamed: Vec<usize> = truth.iter().map(|l| [3, 0, 2, 1][*l]).collect();
        assert_eq!(adjusted_rand_index::<f64, _, _>(&truth, &renamed).unwrap(), 1.0);

        let mut total = 0.0;
        for _ in 0..1000 {
            let mut b = truth.clone();
            b.shuffle(&mut rng);
            let x: f64 = adjusted_rand_index(&truth, &b).unwrap();
            let relabelled: Vec<usize> = b.iter().map(|l| (l + 1) % 4).collect();
            assert!((x - adjusted_rand_index::<f64, _, _>(&truth, &relabelled).unwrap()).abs() < 1e-12);
            total += x;
        }
        let mean = total / 1000.0;
        assert!(mean.abs() < 0.05, "mean ari {mean}");

        for _ in 0..100 {
            let n = rng.random_range(2..13);
            let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let got: f64 = adjusted_rand_index(&a, &b).unwrap();
            let want = ari_by_contingency(&a, &b);
            assert!((got - want).abs() < 1e-10, "{a:?} {b:?}: {got} vs {want}");
        }
    });
}

#[test]
fn integrated_difficulty_criterion() {
    criterion("integrated difficulty", None, || {
        let w = DifficultyWeights::default();
        assert_eq!(integrated_difficulty(2, 1.0, 0.0, &w).unwrap(), 0.0);
        assert_eq!(integrated_difficulty(4, -1.0, 3.0, &w).unwrap(), 1.0);
        let mid = integrated_difficulty(4, 1.0, 0.0, &w).unwrap();
        assert!((mid - 0.37037).abs() < 1e-5 && (mid - 1.0 / 2.7).abs() < 1e-9, "{mid}");

        // Group count only takes three values; ARI and overlap get nine each.
        let aris: Vec<f64> = (0..9).map(|i| -1.0 + 0.25 * i as f64).collect();
        let overlaps: Vec<f64> = (0..9).map(|i| 0.375 * i as f64).collect();
        let d = |m: usize, a: f64, o: f64| integrated_difficulty(m, a, o, &w).unwrap();
        for m in 2..=4 {
            for (i, &a) in aris.iter().enumerate() {
                for (j, &o) in overlaps.iter().enumerate() {
                    let v = d(m, a, o);
                    assert!((0.0..=1.0).contains(&v));
                    if m < 4 {
                        assert!(d(m + 1, a, o) > v);
                    }
                    if i < 8 {
                        assert!(d(m, aris[i + 1], o) < v);
                    }
                    if j < 8 {
                        assert!(d(m, a, overlaps[j + 1]) > v);
                    }
                }
            }
        }

        // F1 falls as integrated difficulty rises.
        let mut recs = Vec::new();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for subset in ["en", "es", "fr"] {
            for (k, (m, ari, overlap)) in [(2, 1.0, 0.0), (3, 0.5, 0.75), (4, 0.0, 1.5), (4, -1.0, 3.0)].into_iter().enumerate() {
                let integrated = d(m, ari, overlap);
                let f1 = 0.9 - 0.2 * k as f64;
                xs.push(integrated);
                ys.push(f1);
                recs.push(synthetic_record("mock", subset, &format!("{subset}-{k}"), (m, 4), f1, 0.0, Some((ari, overlap, integrated))));
            }
        }
        let rho = spearman(&xs, &ys).unwrap().unwrap();
        assert!((rho + 1.0).abs() < 1e-12, "{rho}");
        let bundle = build_report(recs, &BinningConfig::default());
        let row = bundle.correlations.iter().find(|r| r.metric == "integrated").unwrap();
        assert_eq!(row.mean_spearman, Some(-1.0));
        assert_eq!(row.subsets_used, 3);
    });
}

#[test]
fn statistics() {
    criterion("statistics", None, || {
        assert_eq!(spearman::<f64>(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), Some(-1.0));
        let ann: Vec<(u8, u8)> = (0..10).map(|i| (1, if i < 8 { 1 } else { 0 })).collect();
        assert_eq!(randolph_kappa::<f64, _>(&ann, 2).unwrap(), 0.6);

        let items = [(0.35, true), (0.25, false), (0.5, true), (0.15, false), (0.32, true), (0.28, false), (0.65, true), (0.05, false)];
        let human: Vec<bool> = items.iter().map(|(_, h)| *h).collect();
        let sims: Vec<TopicSimilarity<f64>> = items.iter().map(|(s, _)| TopicSimilarity { matched: Some(*s), others: vec![0.0] }).collect();
        let cal = calibrate_ta(&human, &default_thresholds::<f64>(), &sims).unwrap();
        assert_eq!(cal.rows.len(), 7);
        assert_eq!(cal.best, 0.3);
        assert!(!cal.tie);

        let fx = fixture(&["en"], &[(2, 2)], 2, json!({}));
        let path = fx.path("annotations.jsonl");
        let body: String = items
            .iter()
            .map(|(s, h)| json!({"similarity": {"matched": s, "others": [0.0]}, "human": h}).to_string() + "\n")
            .collect();
        std::fs::write(&path, body).unwrap();
        let cal = cmd_calibrate_ta(&fx.config(), &path, &fx.path("cal")).unwrap();
        assert_eq!(cal.best, 0.3);
    });
}

#[derive(Deserialize)]
struct ParseExpect {
    blocks: usize,
    groups: Vec<(String, Vec<String>)>,
}

#[derive(Deserialize)]
struct ParseFixture {
    name: String,
    raw: String,
    expect: Option<ParseExpect>,
}

#[test]
fn parser_corpus() {
    criterion("parser corpus", None, || {
        let corpus: Vec<ParseFixture> =
            serde_json::from_str(include_str!("../../llm/tests/fixtures/parser_corpus.json")).unwrap();
        assert!(corpus.len() >= 20);
        let names: HashSet<&str> = corpus.iter().map(|f| f.name.as_str()).collect();
        for kind in ["four_groups_clean", "restated_answer", "self_correcting_answer", "prose_only"] {
            assert!(names.contains(kind), "missing {kind}");
        }
        for f in &corpus {
            match (&f.expect, parse_answer(&f.raw)) {
                (Some(e), Ok(a)) => {
                    let got: Vec<(String, Vec<String>)> = a.groups.iter().map(|g| (g.topic.clone(), g.words.clone())).collect();
                    assert_eq!(got, e.groups, "{}", f.name);
                    assert_eq!(a.block_count, e.blocks, "{}", f.name);
                }
                (None, Err(_)) => {
                    let backend = Arc::new(ScriptedBackend::new(vec![Ok("no luck".into())]));
                    let client = ModelClient::new("repair", ModelConfig::mock(BackendKind::Canned, "repair"), backend.clone());
                    let r = parse_or_repair(&f.raw, &f.name, Some(&client)).unwrap();
                    assert_eq!(backend.calls(), 1, "{}", f.name);
                    assert!(r.failed && r.answer.groups.is_empty(), "{}", f.name);
                }
                (e, got) => panic!("{}: expected parse {}, got {got:?}", f.name, e.is_some()),
            }
        }
    });
}

fn stable(records: &[ResultRecord]) -> Vec<ResultRecord> {
    let mut v: Vec<ResultRecord> = records.iter().map(ResultRecord::stable).collect();
    v.sort_by(|a, b| (&a.subset, &a.game_id).cmp(&(&b.subset, &b.game_id)));
    v
}

fn all_records(root: &Path) -> Vec<ResultRecord> {
    let mut out = Vec::new();
    for f in wordgroup_harness::records::collect_result_files(&[root.to_path_buf()]).unwrap() {
        out.extend(read_records(&f).unwrap());
    }
    out
}

#[test]
fn end_to_end() {
    criterion("end-to-end mini benchmark", secs(60), || {
        let subsets = ["en", "es", "fr"];
        let settings = [(2, 4), (3, 3), (4, 4)];
        let fx = fixture(&subsets, &settings, 20, json!({}));
        let cfg = fx.config();
        cmd_generate(&cfg).unwrap();

        let echo = cmd_evaluate(&cfg, &opts("echo", SplitSelection::Test)).unwrap();
        assert_eq!((echo.evaluated, echo.errors, echo.parse_failures), (90, 0, 0));
        cmd_difficulty(&cfg, &echo.files).unwrap();
        let report = cmd_report(&[cfg.results_dir.join("echo")], &fx.path("report-echo"), SplitSelection::Test, &cfg.bins).unwrap();
        assert_eq!(report.means.iter().filter(|r| r.subset != "all").count(), 9);
        for r in &report.means {
            assert_eq!((r.mean_f1, r.mean_ctd, r.mean_ta), (Some(1.0), Some(1.0), Some(1.0)), "{r:?}");
        }
        for r in &report.cultural {
            for v in [r.non_cultural_f1, r.cultural_f1, r.non_cultural_ta, r.cultural_ta].into_iter().flatten() {
                assert_eq!(v, 1.0, "{r:?}");
            }
        }
        for r in &report.tags {
            assert!(r.mean_f1.is_none_or(|v| v == 1.0) && r.mean_ta.is_none_or(|v| v == 1.0), "{r:?}");
        }

        let random = cmd_evaluate(&cfg, &opts("random", SplitSelection::Test)).unwrap();
        assert_eq!(random.evaluated, 90);
        let report = cmd_report(&[cfg.results_dir.join("random")], &fx.path("report-random"), SplitSelection::Test, &cfg.bins).unwrap();
        for r in report.means.iter().filter(|r| r.subset != "all") {
            let (f1, ctd) = (r.mean_f1.unwrap(), r.mean_ctd.unwrap());
            assert!(f1 > 0.0 && f1 < 1.0, "{r:?}");
            assert!(ctd <= f1, "{r:?}");
        }

        // Interrupt a second run part way, then resume it against the same cache.
        let mut rerun = cfg.clone();
        rerun.results_dir = fx.path("results-rerun");
        let partial = cmd_evaluate(&rerun, &EvalOptions { limit: Some(3), ..opts("random", SplitSelection::Test) }).unwrap();
        assert_eq!(partial.evaluated, 9);
        let resumed = cmd_evaluate(&rerun, &opts("random", SplitSelection::Test)).unwrap();
        assert_eq!((resumed.evaluated, resumed.skipped), (81, 9));
        assert_eq!(partial.cache_hits + resumed.cache_hits, 90, "every query served from cache");
        assert_eq!(stable(&all_records(&rerun.results_dir.join("random"))), stable(&all_records(&cfg.results_dir.join("random"))));
        cmd_report(&[rerun.results_dir.join("random")], &fx.path("report-rerun"), SplitSelection::Test, &cfg.bins).unwrap();
        let (a, b) = (tree_bytes(&fx.path("report-rerun")), tree_bytes(&fx.path("report-random")));
        for (name, bytes) in &a {
            let other = &b[name];
            if name.ends_with(".csv") {
                assert!(other == bytes, "{name} differs after resuming");
            } else {
                // Sidecars name their input files, which live in different directories.
                let strip = |raw: &[u8]| {
                    let mut v: serde_json::Value = serde_json::from_slice(raw).unwrap();
                    v["meta"]["inputs"] = serde_json::Value::Null;
                    v
                };
                assert_eq!(strip(bytes), strip(other), "{name}");
            }
        }
    });
}

#[test]
fn binning_boundaries() {
    criterion("binning boundaries", None, || {
        let b = BinningConfig::default();
        assert_eq!(place(0.0, &b.ari_edges), Placement::InRange(0));
        assert_eq!(place(0.5, &b.ari_edges), Placement::InRange(1));
        assert_eq!(place(0.75, &b.overlap_edges), Placement::InRange(0));
        assert_eq!(place(2.25, &b.overlap_edges), Placement::InRange(2));

        let recs = vec![
            synthetic_record("mock", "en", "a", (4, 4), 0.2, 0.0, Some((0.0, 0.75, 0.5))),
            synthetic_record("mock", "en", "b", (4, 4), 0.6, 0.0, Some((0.5, 2.25, 0.5))),
        ];
        let bundle = build_report(recs, &b);
        let count = |metric: &str, bucket: &str| {
            bundle.buckets.iter().find(|r| r.metric == metric && r.bucket == bucket).map_or(0, |r| r.count)
        };
        assert_eq!(count("ari", "[-0.5, 0.0]"), 1);
        assert_eq!(count("ari", "(0.0, 0.5]"), 1);
        assert_eq!(count("word_overlap", "[0.0, 0.75]"), 1);
        assert_eq!(count("word_overlap", "(1.5, 2.25]"), 1);
    });
}
