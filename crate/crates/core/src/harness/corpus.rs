//! Labelled intent segments harvested from direct-communication games.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::game::{Action, GameConfig, Player, Trajectory};
use crate::helper::{capping, dcc_policy, IntentResponseDfas};
use crate::seed::derive;
use crate::seeker::Seeker;

use super::trial::TrialOptions;

/// A segment labelled for one automaton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub layout: usize,
    pub trajectory: usize,
    pub segment: Vec<Action>,
    /// Which intent-response automaton the label is for.
    pub dfa: Action,
    pub label: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub records: Vec<CorpusRecord>,
    pub trajectories: usize,
    pub signals: usize,
}

impl Corpus {
    pub fn to_json_lines(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
            .collect()
    }

    pub fn positives(&self) -> impl Iterator<Item = &CorpusRecord> {
        self.records.iter().filter(|r| r.label)
    }

    /// Fraction of records on which `dfas` agrees with the label.
    pub fn agreement(&self, dfas: &IntentResponseDfas) -> f64 {
        if self.records.is_empty() {
            return 1.0;
        }
        let ok = self
            .records
            .iter()
            .filter(|r| dfas.get(r.dfa).accepts(&r.segment).unwrap_or(false) == r.label)
            .count();
        ok as f64 / self.records.len() as f64
    }
}

/// Plays `per_layout` seeded games per layout with a signalling seeker and a
/// helper that hears the request directly. Every segment extracted from a
/// signalling turn is a positive example for the requested action and a
/// negative one for the other three.
pub fn collect_training_corpus(
    layouts: &[GameConfig],
    per_layout: usize,
    cap: usize,
    seed: u64,
    options: &TrialOptions,
) -> Corpus {
    let mut corpus = Corpus::default();
    for (layout, cfg) in layouts.iter().enumerate() {
        for trajectory in 0..per_layout {
            let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, &[layout as u64, trajectory as u64]));
            let mut seeker = Seeker::new(options.convention)
                .with_violation_cost(options.violation_cost)
                .with_belief_threshold(options.belief_threshold);
            let mut token = cfg.init();
            let mut steps = 0usize;
            corpus.trajectories += 1;
            'game: while steps < cap && token != cfg.goal() {
                let Ok(turn) = seeker.take_turn(cfg, token) else {
                    break;
                };
                let mut traj = Trajectory::new(token);
                for &a in &turn.actions {
                    if steps >= cap {
                        break 'game;
                    }
                    token = cfg.transition(Player::Seeker, token, a).expect("legal seeker move");
                    traj.push(Player::Seeker, a, token);
                    steps += 1;
                    if token == cfg.goal() {
                        break 'game;
                    }
                }
                let Some(expected) = turn.expected else {
                    continue;
                };
                let segments = capping(&traj);
                if !segments.is_empty() {
                    corpus.signals += 1;
                }
                for seg in segments {
                    for a in Action::ALL {
                        corpus.records.push(CorpusRecord {
                            layout,
                            trajectory,
                            segment: seg.actions.clone(),
                            dfa: a,
                            label: a == expected,
                        });
                    }
                }
                if steps >= cap {
                    break;
                }
                let at = token;
                match dcc_policy(at, Some(expected), cfg, &mut rng) {
                    Ok(h) => {
                        token = cfg.transition(Player::Helper, at, h).expect("legal helper move");
                        steps += 1;
                        seeker.observe_helper(expected, Some(h), at, cfg.size());
                    }
                    Err(_) => {
                        if !seeker.observe_helper(expected, None, at, cfg.size()) && turn.actions.is_empty() {
                            break;
                        }
                    }
                }
            }
        }
    }
    corpus
}
