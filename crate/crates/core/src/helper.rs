//! The helper: extracts intent segments from the seeker's last turn, votes
//! over the intent-response automata, and picks a move.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{AutomataError, Dfa};
use crate::game::{Action, Cell, GameConfig, Player, Trajectory};
use crate::seeker::SignalConvention;

#[derive(Debug, Error)]
pub enum HelperError {
    #[error("helper has no legal move at {0}")]
    NoAction(Cell),
    #[error("intent-response automata must share one alphabet")]
    AlphabetMismatch,
    #[error("{path}: {source}")]
    Dfa {
        path: String,
        #[source]
        source: AutomataError,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// How the helper chooses its move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    /// No coordination: uniform over legal moves.
    NC,
    /// No-communication coordination through the learned automata.
    NCC,
    /// Direct communication: the requested action is known.
    DCC,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::NC, Strategy::NCC, Strategy::DCC];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::NC => "NC",
            Strategy::NCC => "NCC",
            Strategy::DCC => "DCC",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "NC" => Ok(Strategy::NC),
            "NCC" => Ok(Strategy::NCC),
            "DCC" => Ok(Strategy::DCC),
            _ => Err(format!("unknown strategy `{s}` (expected nc, ncc or dcc)")),
        }
    }
}

/// One automaton per helper action, all over the same seeker alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntentResponseDfas {
    dfas: [Dfa; 4],
}

impl IntentResponseDfas {
    /// `dfas` is indexed by canonical action order.
    pub fn new(dfas: [Dfa; 4]) -> Result<Self, HelperError> {
        let alphabet = dfas[0].alphabet();
        if dfas.iter().any(|d| d.alphabet() != alphabet) {
            return Err(HelperError::AlphabetMismatch);
        }
        Ok(IntentResponseDfas { dfas })
    }

    pub fn from_map(mut map: BTreeMap<Action, Dfa>) -> Result<Self, HelperError> {
        let take = |m: &mut BTreeMap<Action, Dfa>, a: Action| {
            m.remove(&a)
                .unwrap_or_else(|| Dfa::empty_language(Action::ALL.to_vec()))
        };
        let dfas = Action::ALL.map(|a| take(&mut map, a));
        IntentResponseDfas::new(dfas)
    }

    /// The automata the seeker's convention implies.
    pub fn oracles(convention: &SignalConvention) -> Self {
        IntentResponseDfas {
            dfas: Action::ALL.map(|a| convention.oracle_dfa(a)),
        }
    }

    pub fn get(&self, a: Action) -> &Dfa {
        &self.dfas[a.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Action, &Dfa)> {
        Action::ALL.into_iter().zip(self.dfas.iter())
    }

    /// Writes `<action>.json` for each action into `dir`, minimised.
    pub fn save_dir(&self, dir: &Path) -> Result<(), HelperError> {
        fs::create_dir_all(dir).map_err(|source| HelperError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        for (a, d) in self.iter() {
            let path = dir.join(format!("{}.json", a.name()));
            fs::write(&path, d.minimize().to_text()).map_err(|source| HelperError::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
        Ok(())
    }

    pub fn load_dir(dir: &Path) -> Result<Self, HelperError> {
        let mut map = BTreeMap::new();
        for a in Action::ALL {
            let path = dir.join(format!("{}.json", a.name()));
            let p = path.display().to_string();
            let text = fs::read_to_string(&path).map_err(|source| HelperError::Io {
                path: p.clone(),
                source,
            })?;
            let dfa = Dfa::from_text(&text).map_err(|source| HelperError::Dfa { path: p, source })?;
            map.insert(a, dfa);
        }
        IntentResponseDfas::from_map(map)
    }
}

/// A detour the seeker made off its shortest route.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub actions: Vec<Action>,
    /// Cell where the detour started.
    pub anchor: Cell,
}

/// Shortest path from the turn's start to its end through the visited
/// subgraph, lexicographically smallest in action order among ties.
pub fn canonical_path(turn: &Trajectory) -> Vec<Cell> {
    let states = turn.states();
    let mut adjacent: BTreeMap<Cell, BTreeSet<(Action, Cell)>> = BTreeMap::new();
    for w in states.windows(2) {
        let (a, b) = (w[0], w[1]);
        if let (Some(ab), Some(ba)) = (a.direction_to(b), b.direction_to(a)) {
            adjacent.entry(a).or_default().insert((ab, b));
            adjacent.entry(b).or_default().insert((ba, a));
        }
    }
    let (start, end) = (turn.start(), turn.end());
    let mut parent: BTreeMap<Cell, Cell> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = BTreeSet::from([start]);
    while let Some(c) = queue.pop_front() {
        if c == end {
            break;
        }
        for &(_, n) in adjacent.get(&c).into_iter().flatten() {
            if seen.insert(n) {
                parent.insert(n, c);
                queue.push_back(n);
            }
        }
    }
    let mut path = vec![end];
    let mut cur = end;
    while cur != start {
        cur = parent[&cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// Splits a seeker turn into intent segments: the actions left over after
/// walking the canonical shortest path through the visited cells.
pub fn capping(turn: &Trajectory) -> Vec<Segment> {
    let path = canonical_path(turn);
    segments_along(turn, &path)
}

/// Pointer scan of `turn` against `path`: a step that moves from `path[j]` to
/// `path[j + 1]` advances the pointer; maximal runs of other steps become segments.
pub fn segments_along(turn: &Trajectory, path: &[Cell]) -> Vec<Segment> {
    let states = turn.states();
    let mut j = 0;
    let mut out = Vec::new();
    let mut run: Option<Segment> = None;
    for (i, step) in turn.steps().iter().enumerate() {
        let from = states[i];
        if j + 1 < path.len() && from == path[j] && step.cell == path[j + 1] {
            j += 1;
            out.extend(run.take());
        } else {
            run.get_or_insert_with(|| Segment {
                actions: Vec::new(),
                anchor: from,
            })
            .actions
            .push(step.action);
        }
    }
    out.extend(run);
    out
}

/// Frequency vote over segments and the resulting action set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NccOutcome {
    pub segments: Vec<Segment>,
    /// Accepted-segment counts after zeroing illegal actions, canonical order.
    pub frequencies: [usize; 4],
    /// The argmax set in canonical order.
    pub actions: Vec<Action>,
}

/// Counts, for every action, the segments its automaton accepts; illegal
/// actions are zeroed and the argmax set returned. With all counts zero the
/// set is every legal action; with no legal action it is empty.
pub fn ncc(s: Cell, turn: &Trajectory, cfg: &GameConfig, dfas: &IntentResponseDfas) -> NccOutcome {
    let segments = capping(turn);
    ncc_over_segments(s, segments, cfg, dfas)
}

pub fn ncc_over_segments(
    s: Cell,
    segments: Vec<Segment>,
    cfg: &GameConfig,
    dfas: &IntentResponseDfas,
) -> NccOutcome {
    let mut frequencies = [0usize; 4];
    for seg in &segments {
        for (a, d) in dfas.iter() {
            if d.accepts(&seg.actions).unwrap_or(false) {
                frequencies[a.index()] += 1;
            }
        }
    }
    let legal = cfg.legal_actions(Player::Helper, s);
    for a in Action::ALL {
        if !legal.contains(&a) {
            frequencies[a.index()] = 0;
        }
    }
    let max = frequencies.iter().copied().max().unwrap_or(0);
    let actions = if max == 0 {
        legal
    } else {
        Action::ALL
            .into_iter()
            .filter(|a| frequencies[a.index()] == max)
            .collect()
    };
    NccOutcome {
        segments,
        frequencies,
        actions,
    }
}

/// Output and transition of the strategy transducer for one helper turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransducerStep {
    pub chosen: Action,
    pub successors: BTreeSet<Cell>,
    pub outcome: NccOutcome,
}

pub fn transducer_step<R: Rng + ?Sized>(
    s: Cell,
    turn: &Trajectory,
    cfg: &GameConfig,
    dfas: &IntentResponseDfas,
    rng: &mut R,
) -> Result<TransducerStep, HelperError> {
    let outcome = ncc(s, turn, cfg, dfas);
    let chosen = pick(&outcome.actions, rng).ok_or(HelperError::NoAction(s))?;
    let successors = outcome
        .actions
        .iter()
        .filter_map(|&a| cfg.transition(Player::Helper, s, a))
        .collect();
    Ok(TransducerStep {
        chosen,
        successors,
        outcome,
    })
}

fn pick<R: Rng + ?Sized>(actions: &[Action], rng: &mut R) -> Option<Action> {
    match actions.len() {
        0 => None,
        1 => Some(actions[0]),
        n => Some(actions[rng.random_range(0..n)]),
    }
}

pub fn nc_policy<R: Rng + ?Sized>(s: Cell, cfg: &GameConfig, rng: &mut R) -> Result<Action, HelperError> {
    pick(&cfg.legal_actions(Player::Helper, s), rng).ok_or(HelperError::NoAction(s))
}

/// Performs `expected` when possible, otherwise a uniform legal move.
pub fn dcc_policy<R: Rng + ?Sized>(
    s: Cell,
    expected: Option<Action>,
    cfg: &GameConfig,
    rng: &mut R,
) -> Result<Action, HelperError> {
    match expected {
        Some(a) if cfg.legal(Player::Helper, s, a) => Ok(a),
        _ => nc_policy(s, cfg, rng),
    }
}

/// A helper move with the audit data behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelperDecision {
    pub action: Action,
    /// Candidate set the move was drawn from.
    pub candidates: Vec<Action>,
    pub frequencies: Option<[usize; 4]>,
}

/// Dispatches one helper turn to the configured strategy.
pub fn helper_turn<R: Rng + ?Sized>(
    strategy: Strategy,
    s: Cell,
    cfg: &GameConfig,
    seeker_turn: &Trajectory,
    expected: Option<Action>,
    dfas: Option<&IntentResponseDfas>,
    rng: &mut R,
) -> Result<HelperDecision, HelperError> {
    match strategy {
        Strategy::NC => {
            let action = nc_policy(s, cfg, rng)?;
            Ok(HelperDecision {
                action,
                candidates: cfg.legal_actions(Player::Helper, s),
                frequencies: None,
            })
        }
        Strategy::DCC => {
            let action = dcc_policy(s, expected, cfg, rng)?;
            let candidates = match expected {
                Some(a) if a == action => vec![a],
                _ => cfg.legal_actions(Player::Helper, s),
            };
            Ok(HelperDecision {
                action,
                candidates,
                frequencies: None,
            })
        }
        Strategy::NCC => {
            let dfas = dfas.expect("NCC requires intent-response automata");
            let step = transducer_step(s, seeker_turn, cfg, dfas, rng)?;
            Ok(HelperDecision {
                action: step.chosen,
                candidates: step.outcome.actions,
                frequencies: Some(step.outcome.frequencies),
            })
        }
    }
}
