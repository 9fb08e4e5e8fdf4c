//! The helper's side of a turn: extract detours from the seeker's moves and
//! vote with the intent automata.
//!
//! ```text
//! cargo run --release --example read_intent
//! ```

use tacit::helper::{capping, ncc};
use tacit::seeker::encode_intent;
use tacit::{Action, Cell, GameConfig, IntentResponseDfas, SignalConvention, Trajectory, WallSet};

fn main() -> anyhow::Result<()> {
    let conv = SignalConvention::default();
    let dfas = IntentResponseDfas::oracles(&conv);
    let cfg = GameConfig::new(6, WallSet::new(), WallSet::new(), Cell::new(3, 0), Cell::new(0, 5))?;

    for want in Action::ALL {
        let anchor = Cell::new(3, 2);
        let mut actions = vec![Action::Right, Action::Right];
        actions.extend(encode_intent(want, anchor, &cfg, &conv)?);
        let turn = Trajectory::from_actions(cfg.init(), &actions, cfg.size()).expect("stays on the board");
        let segments: Vec<Vec<&str>> = capping(&turn)
            .iter()
            .map(|s| s.actions.iter().map(|a| a.name()).collect())
            .collect();
        let vote = ncc(turn.end(), &turn, &cfg, &dfas);
        println!("seeker wants {want}: segments {segments:?}");
        let picks: Vec<&str> = vote.actions.iter().map(|a| a.name()).collect();
        println!("  votes R/U/L/D {:?}, helper picks {picks:?}", vote.frequencies);
    }
    Ok(())
}
