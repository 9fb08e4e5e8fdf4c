//! Runs NC, NCC and DCC on generated 9×9 and 12×12 suites and prints the
//! summary table.
//!
//! ```text
//! cargo run --release --example compare_strategies -- [layouts] [trials] [density]
//! ```

use std::time::Instant;

use tacit::harness::{generate_suite, run_experiment, ExperimentConfig, MazeParams};
use tacit::{IntentResponseDfas, SignalConvention, Strategy};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let layouts: usize = args.first().map_or(Ok(10), |s| s.parse())?;
    let trials: usize = args.get(1).map_or(Ok(100), |s| s.parse())?;
    let density: f64 = args.get(2).map_or(Ok(0.7), |s| s.parse())?;

    let dfas = IntentResponseDfas::oracles(&SignalConvention::default());
    for size in [9, 12] {
        let suite = generate_suite(MazeParams::new(size).with_density(density), layouts, 5, 2025)?;
        println!("{size}x{size}: {} configurations, {trials} trials each", suite.len());
        println!(
            "  {:<4} {:>14} {:>16} {:>12} {:>16}",
            "", "success %", "steps", "walls", "wall error %"
        );
        for strategy in Strategy::ALL {
            let started = Instant::now();
            let mut exp = ExperimentConfig::new(suite.clone(), strategy, 7);
            exp.trials = trials;
            let out = run_experiment(&exp, Some(&dfas))?;
            let s = &out.summary;
            println!(
                "  {:<4} {:>7.2} ± {:<5.2} {:>8.2} ± {:<6.2} {:>5.2} ± {:<4.2} {:>7.2} ± {:<6.2} ({:.1?})",
                strategy.to_string(),
                s.success_rate.mean,
                s.success_rate.std,
                s.steps.mean,
                s.steps.std,
                s.wall_count.mean,
                s.wall_count.std,
                s.wall_error_rate.mean,
                s.wall_error_rate.std,
                started.elapsed()
            );
        }
    }
    Ok(())
}
