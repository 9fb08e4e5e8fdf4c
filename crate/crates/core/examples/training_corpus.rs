//! Collects labelled detours from seeker/helper play and prints the first
//! few JSON records.
//!
//! ```text
//! cargo run --release --example training_corpus -- [layouts] [per-layout]
//! ```

use tacit::harness::{collect_training_corpus, gen_maze, MazeParams, TrialOptions};
use tacit::{IntentResponseDfas, SignalConvention};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let layouts: u64 = args.first().map_or(Ok(5), |s| s.parse())?;
    let per_layout: usize = args.get(1).map_or(Ok(10), |s| s.parse())?;

    let boards = (0..layouts)
        .map(|s| gen_maze(MazeParams::new(9).with_density(0.6), s))
        .collect::<Result<Vec<_>, _>>()?;
    let corpus = collect_training_corpus(&boards, per_layout, 300, 1, &TrialOptions::default());
    println!(
        "{} trajectories, {} signals, {} records ({} positive)",
        corpus.trajectories,
        corpus.signals,
        corpus.records.len(),
        corpus.positives().count()
    );
    let oracles = IntentResponseDfas::oracles(&SignalConvention::default());
    println!("agreement with the convention: {:.3}", corpus.agreement(&oracles));
    for line in corpus.to_json_lines().lines().take(8) {
        println!("{line}");
    }
    Ok(())
}
