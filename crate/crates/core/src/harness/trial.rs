use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::game::{Action, Cell, GameConfig, Player, Trajectory, WallSet};
use crate::helper::{helper_turn, HelperError, IntentResponseDfas, Strategy};
use crate::seeker::{Seeker, SeekerError, SignalConvention, DEFAULT_VIOLATION_COST};

/// Knobs shared by every trial of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOptions {
    pub convention: SignalConvention,
    pub violation_cost: f64,
    pub belief_threshold: usize,
    /// Whether the seeker embeds signals in its trajectory under DCC. Off by
    /// default: the request already travels over the direct channel.
    pub signal_under_dcc: bool,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions {
            convention: SignalConvention::default(),
            violation_cost: DEFAULT_VIOLATION_COST,
            belief_threshold: 1,
            signal_under_dcc: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialResult {
    pub success: bool,
    pub steps: usize,
    pub memorized_wall_count: usize,
    pub wall_error_rate: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "agent", rename_all = "lowercase")]
pub enum TurnRecord {
    Seeker {
        start: (usize, usize),
        actions: Vec<Action>,
        expected: Option<Action>,
        progress_len: usize,
        relaxed: bool,
        stuck: bool,
    },
    Helper {
        start: (usize, usize),
        action: Option<Action>,
        candidates: Vec<Action>,
        frequencies: Option<[usize; 4]>,
        belief_added: bool,
    },
}

/// Per-turn audit trail of one trial.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct TrialLog {
    pub turns: Vec<TurnRecord>,
    /// Token position after every primitive action, in order.
    pub cells: Vec<(usize, usize)>,
}

impl TrialLog {
    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.turns
            .iter()
            .map(|t| serde_json::to_string(t).expect("turn records serialize") + "\n")
            .collect()
    }
}

/// Count of memorised walls and the fraction absent from the helper's layout.
pub fn wall_memory_metrics(belief: &WallSet, cfg: &GameConfig) -> (usize, f64) {
    let count = belief.len();
    if count == 0 {
        return (0, 0.0);
    }
    let wrong = belief.iter().filter(|&e| !cfg.helper_walls().contains(e)).count();
    (count, wrong as f64 / count as f64)
}

pub fn run_trial(
    cfg: &GameConfig,
    strategy: Strategy,
    dfas: Option<&IntentResponseDfas>,
    cap: usize,
    seed: u64,
    options: &TrialOptions,
) -> TrialResult {
    run_trial_logged(cfg, strategy, dfas, cap, seed, options).0
}

/// Alternates seeker and helper turns from the initial cell until the goal
/// is reached, `cap` primitive actions have been taken, or a round passes in
/// which neither agent moves and the seeker learns nothing.
pub fn run_trial_logged(
    cfg: &GameConfig,
    strategy: Strategy,
    dfas: Option<&IntentResponseDfas>,
    cap: usize,
    seed: u64,
    options: &TrialOptions,
) -> (TrialResult, TrialLog) {
    assert!(
        strategy != Strategy::NCC || dfas.is_some(),
        "NCC trials need intent-response automata"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seeker = Seeker::new(options.convention)
        .with_violation_cost(options.violation_cost)
        .with_belief_threshold(options.belief_threshold);
    if strategy == Strategy::DCC && !options.signal_under_dcc {
        seeker = seeker.without_signals();
    }
    let mut log = TrialLog::default();
    let mut token = cfg.init();
    let mut steps = 0usize;
    let rc = |c: Cell| (c.row, c.col);

    let success = 'game: loop {
        if steps >= cap {
            break false;
        }
        let steps_before = steps;

        // seeker turn
        let mut traj = Trajectory::new(token);
        let expected = match seeker.take_turn(cfg, token) {
            Ok(turn) => {
                log.turns.push(TurnRecord::Seeker {
                    start: rc(token),
                    actions: turn.actions.clone(),
                    expected: turn.expected,
                    progress_len: turn.progress_len,
                    relaxed: turn.relaxed,
                    stuck: false,
                });
                for &a in &turn.actions {
                    if steps >= cap {
                        break 'game false;
                    }
                    token = cfg
                        .transition(Player::Seeker, token, a)
                        .expect("seeker only executes legal moves");
                    traj.push(Player::Seeker, a, token);
                    log.cells.push(rc(token));
                    steps += 1;
                    if token == cfg.goal() {
                        break 'game true;
                    }
                }
                turn.expected
            }
            Err(SeekerError::Stuck(_) | SeekerError::NoLegalMove(_)) => {
                log.turns.push(TurnRecord::Seeker {
                    start: rc(token),
                    actions: Vec::new(),
                    expected: None,
                    progress_len: 0,
                    relaxed: true,
                    stuck: true,
                });
                None
            }
        };
        if steps >= cap {
            break false;
        }

        // helper turn
        let at = token;
        match helper_turn(strategy, at, cfg, &traj, expected, dfas, &mut rng) {
            Ok(decision) => {
                token = cfg
                    .transition(Player::Helper, at, decision.action)
                    .expect("helper only executes legal moves");
                log.cells.push(rc(token));
                steps += 1;
                let belief_added = expected
                    .is_some_and(|e| seeker.observe_helper(e, Some(decision.action), at, cfg.size()));
                log.turns.push(TurnRecord::Helper {
                    start: rc(at),
                    action: Some(decision.action),
                    candidates: decision.candidates,
                    frequencies: decision.frequencies,
                    belief_added,
                });
                if token == cfg.goal() {
                    break true;
                }
            }
            Err(HelperError::NoAction(_)) => {
                let belief_added = expected.is_some_and(|e| seeker.observe_helper(e, None, at, cfg.size()));
                log.turns.push(TurnRecord::Helper {
                    start: rc(at),
                    action: None,
                    candidates: Vec::new(),
                    frequencies: None,
                    belief_added,
                });
                // Nothing moved and nothing was learned: every later round
                // would repeat this one.
                if steps == steps_before && !belief_added {
                    break false;
                }
            }
            Err(e) => unreachable!("helper turn failed: {e}"),
        }
    };

    let (memorized_wall_count, wall_error_rate) = wall_memory_metrics(seeker.belief().walls(), cfg);
    (
        TrialResult {
            success,
            steps,
            memorized_wall_count,
            wall_error_rate,
            seed,
        },
        log,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Edge;

    fn cfg(size: usize, init: (usize, usize), goal: (usize, usize)) -> GameConfig {
        GameConfig::new(size, WallSet::new(), WallSet::new(), init.into(), goal.into()).unwrap()
    }

    #[test]
    fn adjacent_goal_takes_one_step() {
        let c = cfg(5, (2, 2), (2, 3));
        let dfas = IntentResponseDfas::oracles(&SignalConvention::default());
        for s in Strategy::ALL {
            let r = run_trial(&c, s, Some(&dfas), 300, 1, &TrialOptions::default());
            assert!(r.success);
            assert_eq!(r.steps, 1);
        }
    }

    #[test]
    fn cap_binds() {
        let c = cfg(5, (2, 2), (2, 4));
        let r = run_trial(&c, Strategy::NC, None, 1, 1, &TrialOptions::default());
        assert!(!r.success);
        assert_eq!(r.steps, 1);
    }

    #[test]
    fn helper_pass_teaches_the_seeker_a_wall() {
        // helper boxed in at the start; the cheap plan asks it to go Right
        let boxed: WallSet = [(0, 1), (1, 0), (1, 2), (2, 1)]
            .into_iter()
            .map(|(r, c)| Edge::new(Cell::new(1, 1), Cell::new(r, c)).unwrap())
            .collect();
        let seeker: WallSet = [Edge::new(Cell::new(1, 1), Cell::new(1, 2)).unwrap()].into_iter().collect();
        let c = GameConfig::new(3, seeker, boxed, Cell::new(1, 1), Cell::new(1, 2)).unwrap();
        let opts = TrialOptions {
            violation_cost: 0.5,
            ..TrialOptions::default()
        };
        let (r, log) = run_trial_logged(&c, Strategy::DCC, None, 50, 3, &opts);
        assert!(r.success);
        assert_eq!(r.steps, 3);
        assert_eq!(r.memorized_wall_count, 1);
        assert_eq!(r.wall_error_rate, 0.0);
        assert!(matches!(
            log.turns[1],
            TurnRecord::Helper {
                action: None,
                belief_added: true,
                ..
            }
        ));
    }

    #[test]
    fn wall_metrics() {
        let c = GameConfig::new(
            5,
            WallSet::new(),
            (0..4)
                .map(|r| Edge::new(Cell::new(r, 0), Cell::new(r, 1)).unwrap())
                .collect(),
            Cell::new(0, 0),
            Cell::new(4, 4),
        )
        .unwrap();
        let truth = c.helper_walls().clone();
        assert_eq!(wall_memory_metrics(&truth, &c), (4, 0.0));
        let mut mixed: WallSet = truth.iter().take(3).collect();
        mixed.insert(Edge::new(Cell::new(4, 3), Cell::new(4, 4)).unwrap());
        assert_eq!(wall_memory_metrics(&mixed, &c), (4, 0.25));
        assert_eq!(wall_memory_metrics(&WallSet::new(), &c), (0, 0.0));
    }
}
