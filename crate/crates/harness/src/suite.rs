//! Suite files on disk: `<suite_dir>/<subset>/<m>x<n>/` holds one JSON file
//! per game plus `manifest.json`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use wordgroup_core::gamegen::{derive_sequential_games, generate_suite, groupings_from_sources, Split, SuiteManifest};
use wordgroup_core::{load_groupings, validate_dataset, Game, GameSuite, SourceGame};

use crate::config::{Config, SourceMode};

pub fn setting_dir(root: &Path, subset: &str, m: usize, n: usize) -> PathBuf {
    root.join(subset).join(format!("{m}x{n}"))
}

/// Reads source games from a JSON array or from JSON lines.
pub fn read_sources(path: &Path) -> Result<Vec<SourceGame>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{}:{}", path.display(), i + 1)))
        .collect()
}

/// Builds every configured suite in memory.
pub fn build_suites(cfg: &Config) -> Result<Vec<GameSuite>> {
    let mut suites = Vec::new();
    for (subset, spec) in &cfg.datasets {
        let path = spec.path();
        if !path.exists() {
            bail!("datasets.{subset}: file not found: {}", path.display());
        }
        let mut d = load_groupings(path).with_context(|| format!("datasets.{subset}"))?;
        d.subset_name = subset.clone();
        let report = validate_dataset(&d);
        if !report.is_valid() {
            let first: Vec<String> = report.violations.iter().take(3).map(|v| format!("{v:?}")).collect();
            bail!("datasets.{subset}: {} rule violations, e.g. {}", report.violations.len(), first.join("; "));
        }
        suites.extend(
            generate_suite(&d, &cfg.settings, cfg.count, cfg.master_seed).with_context(|| format!("datasets.{subset}"))?,
        );
    }
    for (subset, spec) in &cfg.source_games {
        if !spec.path.exists() {
            bail!("source_games.{subset}: file not found: {}", spec.path.display());
        }
        let sources = read_sources(&spec.path).with_context(|| format!("source_games.{subset}"))?;
        match spec.mode {
            SourceMode::Sequential => {
                for &(m, n) in cfg.settings.iter().filter(|(m, _)| *m == 4) {
                    let suite = derive_sequential_games(subset, &sources, n, cfg.master_seed)
                        .with_context(|| format!("source_games.{subset} ({m}x{n})"))?;
                    suites.push(suite);
                }
            }
            SourceMode::Shuffled => {
                let d = groupings_from_sources(subset, &spec.language, &sources);
                suites.extend(
                    generate_suite(&d, &cfg.settings, cfg.count, cfg.master_seed)
                        .with_context(|| format!("source_games.{subset}"))?,
                );
            }
        }
    }
    Ok(suites)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GenerateSummary {
    pub suites: usize,
    pub games: usize,
}

/// Writes suites, replacing any game files left from an earlier run.
pub fn write_suites(root: &Path, suites: &[GameSuite]) -> Result<GenerateSummary> {
    let mut summary = GenerateSummary::default();
    for suite in suites {
        let (m, n) = suite.setting;
        let dir = setting_dir(root, &suite.source_subset, m, n);
        if dir.exists() {
            for entry in std::fs::read_dir(&dir)? {
                let p = entry?.path();
                if p.extension().is_some_and(|e| e == "json") {
                    std::fs::remove_file(&p)?;
                }
            }
        }
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (_, game) in suite.games() {
            game.save(&dir.join(format!("{}.json", game.id)))?;
            summary.games += 1;
        }
        let manifest = serde_json::to_string_pretty(&suite.manifest())? + "\n";
        std::fs::write(dir.join("manifest.json"), manifest)?;
        summary.suites += 1;
    }
    Ok(summary)
}

pub fn cmd_generate(cfg: &Config) -> Result<GenerateSummary> {
    let suites = build_suites(cfg)?;
    write_suites(&cfg.suite_dir, &suites)
}

/// Games of a subset on disk, in setting then manifest order.
pub fn load_subset(root: &Path, subset: &str) -> Result<Vec<(Split, Game)>> {
    let base = root.join(subset);
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(&base)
        .with_context(|| format!("no suite for subset {subset:?} under {}", root.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("manifest.json").exists())
        .collect();
    dirs.sort();
    let mut games = Vec::new();
    for dir in dirs {
        let text = std::fs::read_to_string(dir.join("manifest.json"))?;
        let manifest: SuiteManifest =
            serde_json::from_str(&text).with_context(|| format!("manifest in {}", dir.display()))?;
        for entry in manifest.games {
            let path = dir.join(format!("{}.json", entry.id));
            let game = Game::load(&path).with_context(|| format!("loading {}", path.display()))?;
            game.validate().with_context(|| format!("invalid game {}", path.display()))?;
            games.push((entry.split, game));
        }
    }
    Ok(games)
}

/// Subsets that have a suite directory.
pub fn suite_subsets(root: &Path) -> Result<Vec<String>> {
    let mut names: Vec<String> = std::fs::read_dir(root)
        .with_context(|| format!("reading suite directory {}", root.display()))?
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    Ok(names)
}
