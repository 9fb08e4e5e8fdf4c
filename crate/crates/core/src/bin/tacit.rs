use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use tacit::harness::{
    collect_training_corpus, compare_dfas, default_cap, generate_suite, learn_intent_dfas, load_suite,
    run_experiment, save_suite, ExperimentConfig, MazeParams, TrialOptions, DEFAULT_DENSITY,
    DEFAULT_JACCARD_LEN,
};
use tacit::lstar::{BoundedEquivalence, DEFAULT_QUERY_BUDGET};
use tacit::{IntentResponseDfas, SignalConvention, Strategy};

#[derive(Parser)]
#[command(name = "tacit", version, about = "Shared-control maze games without communication")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate maze layouts, one file per (layout, treasure).
    GenMazes {
        #[arg(long, default_value_t = 9)]
        size: usize,
        /// Number of layouts.
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Fraction of interior edges walled on each board.
        #[arg(long, default_value_t = DEFAULT_DENSITY)]
        density: f64,
        #[arg(long, default_value_t = 5)]
        treasures: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Learn the four intent-response automata with L*.
    LearnDfas {
        #[arg(long, default_value_t = 2000)]
        bound: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_QUERY_BUDGET)]
        budget: usize,
        /// Output directory; receives one automaton per action and report.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run seeded trials over a maze directory and write a CSV.
    RunExperiment {
        #[arg(long)]
        mazes: PathBuf,
        #[arg(long)]
        strategy: Strategy,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Step cap; 300 up to 9×9 and 600 above when omitted.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Automata directory; the seeker's own automata when omitted.
        #[arg(long)]
        dfas: Option<PathBuf>,
        /// Worker threads, 0 for one per core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare learned automata with reference ones.
    CompareDfas {
        #[arg(long)]
        learned: PathBuf,
        /// Reference directory; the seeker's own automata when omitted.
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_JACCARD_LEN)]
        max_len: usize,
    },
    /// Record labelled signal segments from direct-communication games.
    CollectCorpus {
        #[arg(long)]
        mazes: PathBuf,
        #[arg(long, default_value_t = 10)]
        per_layout: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON-lines output file.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            eprintln!("error: missing subcommand (see --help)");
            return ExitCode::from(2);
        }
        Err(e) if e.use_stderr() => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
        Err(e) => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // library errors already print their cause, so skip repeats
            let mut msg = String::new();
            for cause in e.chain().map(|c| c.to_string()) {
                if !msg.contains(&cause) {
                    if !msg.is_empty() {
                        msg.push_str(": ");
                    }
                    msg.push_str(&cause);
                }
            }
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("{}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("{}", path.display()))
}

fn oracles_or(dir: Option<&Path>) -> Result<IntentResponseDfas> {
    Ok(match dir {
        Some(d) => IntentResponseDfas::load_dir(d)?,
        None => IntentResponseDfas::oracles(&SignalConvention::default()),
    })
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::GenMazes {
            size,
            count,
            density,
            treasures,
            seed,
            out_dir,
        } => {
            if !(0.0..=1.0).contains(&density) {
                bail!("density must lie in [0, 1], got {density}");
            }
            let suite = generate_suite(MazeParams::new(size).with_density(density), count, treasures, seed)?;
            save_suite(&suite, &out_dir)?;
            println!("wrote {} mazes to {}", suite.len(), out_dir.display());
        }
        Command::LearnDfas {
            bound,
            max_len,
            seed,
            budget,
            out,
        } => {
            let params = BoundedEquivalence {
                bound,
                max_len,
                seed,
                ..BoundedEquivalence::default()
            };
            let (dfas, reports) = learn_intent_dfas(&SignalConvention::default(), params, budget)?;
            dfas.save_dir(&out)?;
            write(&out.join("report.json"), &serde_json::to_string_pretty(&reports)?)?;
            for r in &reports {
                println!(
                    "{:<5} states={:<3} membership={:<6} equivalence={:<3} {:.3}s",
                    r.action.to_string(),
                    r.states,
                    r.membership_queries,
                    r.equivalence_queries,
                    r.seconds
                );
            }
        }
        Command::RunExperiment {
            mazes,
            strategy,
            trials,
            cap,
            seed,
            dfas,
            workers,
            out,
        } => {
            let suite = load_suite(&mazes)?;
            if suite.is_empty() {
                bail!("{}: no maze files", mazes.display());
            }
            let size = suite[0].config.size();
            let dfas = match strategy {
                Strategy::NCC => Some(oracles_or(dfas.as_deref())?),
                _ => None,
            };
            let mut exp = ExperimentConfig::new(suite, strategy, seed);
            exp.trials = trials;
            exp.cap = cap.unwrap_or_else(|| default_cap(size));
            exp.workers = workers;
            let output = run_experiment(&exp, dfas.as_ref())?;
            write(&out, &output.to_csv_string())?;
            for line in output.summary.footer_lines() {
                println!("{line}");
            }
        }
        Command::CompareDfas {
            learned,
            oracle,
            max_len,
        } => {
            let learned = IntentResponseDfas::load_dir(&learned)?;
            let oracle = oracles_or(oracle.as_deref())?;
            for row in compare_dfas(&learned, &oracle, max_len)? {
                let cex = row.counterexample.map_or_else(
                    || "-".to_string(),
                    |w| format!("[{}]", w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")),
                );
                println!(
                    "{:<5} jaccard={:.4} equivalent={} counterexample={cex}",
                    row.action.to_string(),
                    row.jaccard,
                    row.equivalent
                );
            }
        }
        Command::CollectCorpus {
            mazes,
            per_layout,
            seed,
            out,
        } => {
            if per_layout == 0 {
                bail!("--per-layout must be at least 1");
            }
            let suite = load_suite(&mazes)?;
            if suite.is_empty() {
                bail!("{}: no maze files", mazes.display());
            }
            let cap = default_cap(suite[0].config.size());
            let layouts: Vec<_> = suite.into_iter().map(|lc| lc.config).collect();
            let corpus = collect_training_corpus(&layouts, per_layout, cap, seed, &TrialOptions::default());
            write(&out, &corpus.to_json_lines())?;
            println!(
                "{} trajectories, {} signals, {} records",
                corpus.trajectories,
                corpus.signals,
                corpus.records.len()
            );
        }
    }
    Ok(())
}
