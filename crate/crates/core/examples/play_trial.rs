//! Plays one seeded NCC trial on a generated 9×9 board and prints every turn.
//!
//! ```text
//! cargo run --release --example play_trial -- [maze-seed] [trial-seed]
//! ```

use tacit::harness::{gen_maze, run_trial_logged, MazeParams, TrialOptions, TurnRecord};
use tacit::{IntentResponseDfas, SignalConvention, Strategy};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let maze_seed: u64 = args.first().map_or(Ok(3), |s| s.parse())?;
    let trial_seed: u64 = args.get(1).map_or(Ok(0), |s| s.parse())?;

    let cfg = gen_maze(MazeParams::new(9).with_density(0.7), maze_seed)?;
    println!("token at {}, goal at {}", cfg.init(), cfg.goal());
    let dfas = IntentResponseDfas::oracles(&SignalConvention::default());
    let (result, log) = run_trial_logged(&cfg, Strategy::NCC, Some(&dfas), 300, trial_seed, &TrialOptions::default());

    for rec in &log.turns {
        match rec {
            TurnRecord::Seeker {
                start,
                actions,
                expected,
                progress_len,
                relaxed,
                ..
            } => {
                let names: Vec<&str> = actions.iter().map(|a| a.name()).collect();
                print!("seeker from {start:?}: progress {:?}", &names[..*progress_len]);
                if let Some(e) = expected {
                    print!(", asks for {e} with {:?}", &names[*progress_len..]);
                }
                println!("{}", if *relaxed { " (belief ignored)" } else { "" });
            }
            TurnRecord::Helper {
                start,
                action,
                frequencies,
                belief_added,
                ..
            } => {
                let moved = action.map_or("nothing".to_string(), |a| a.to_string());
                print!("helper from {start:?}: {moved}");
                if let Some(f) = frequencies {
                    print!(" (votes R/U/L/D {f:?})");
                }
                println!("{}", if *belief_added { ", seeker notes a wall" } else { "" });
            }
        }
    }
    println!(
        "success={} steps={} remembered walls={} wrong={:.1}%",
        result.success,
        result.steps,
        result.memorized_wall_count,
        100.0 * result.wall_error_rate
    );
    Ok(())
}
