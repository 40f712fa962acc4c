use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use wordgroup_harness::calibrate::cmd_calibrate_ta;
use wordgroup_harness::difficulty::cmd_difficulty;
use wordgroup_harness::records::collect_result_files;
use wordgroup_harness::suite::cmd_generate;
use wordgroup_harness::{cmd_evaluate, cmd_report, Config, EvalOptions, SplitSelection};

#[derive(Parser)]
#[command(name = "wordgroup", version, about = "Generate, evaluate and report word grouping games")]
struct Cli {
    /// JSON configuration file.
    #[arg(short, long, global = true, default_value = "wordgroup.json")]
    config: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample game suites for every configured subset and setting.
    Generate,
    /// Query a model on generated games and append scored records.
    Evaluate {
        #[arg(long)]
        model: String,
        /// Subsets to evaluate; defaults to every generated subset.
        #[arg(long = "subset")]
        subsets: Vec<String>,
        #[arg(long, value_enum, default_value_t = SplitSelection::Test)]
        split: SplitSelection,
        /// Evaluate at most this many new games per subset.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Add difficulty profiles to result files.
    Difficulty {
        /// Result files or directories; defaults to the results directory.
        results: Vec<PathBuf>,
    },
    /// Aggregate result files into report tables.
    Report {
        /// Result files or directories; defaults to the results directory.
        results: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = SplitSelection::All)]
        split: SplitSelection,
        /// Output directory; defaults to the configured report directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Choose the topic-achieved threshold that best agrees with human labels.
    CalibrateTa {
        /// JSON lines of annotations.
        annotations: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    let cfg = Config::load(&cli.config)?;
    let or_results = |paths: Vec<PathBuf>| if paths.is_empty() { vec![cfg.results_dir.clone()] } else { paths };
    match cli.command {
        Command::Generate => {
            let s = cmd_generate(&cfg)?;
            println!("wrote {} games in {} suites to {}", s.games, s.suites, cfg.suite_dir.display());
        }
        Command::Evaluate { model, subsets, split, limit } => {
            let s = cmd_evaluate(&cfg, &EvalOptions { model, subsets, split, limit })?;
            println!(
                "evaluated {} games ({} skipped, {} cached, {} errors, {} unparseable)",
                s.evaluated, s.skipped, s.cache_hits, s.errors, s.parse_failures
            );
        }
        Command::Difficulty { results } => {
            let files = collect_result_files(&or_results(results))?;
            let s = cmd_difficulty(&cfg, &files)?;
            println!("profiled {} records ({} failed) in {} files", s.profiled, s.failed, s.files.len());
        }
        Command::Report { results, split, out } => {
            let out = out.unwrap_or_else(|| cfg.report_dir.clone());
            let b = cmd_report(&or_results(results), &out, split, &cfg.bins)?;
            println!("report over {} records written to {}", b.records, out.display());
        }
        Command::CalibrateTa { annotations, out } => {
            let out = out.unwrap_or_else(|| cfg.report_dir.clone());
            let c = cmd_calibrate_ta(&cfg, &annotations, &out)?;
            println!("best threshold {} (kappa {:.3}{})", c.best, c.best_kappa, if c.tie { ", tied" } else { "" });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
