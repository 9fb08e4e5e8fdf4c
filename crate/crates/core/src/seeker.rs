//! The seeker: minimum-violation planning, intent signaling through
//! out-and-back detours, and the memorised belief about helper walls.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::automata::Dfa;
use crate::game::{geom_next, Action, Cell, Edge, GameConfig, Player, WallSet};

pub const DEFAULT_VIOLATION_COST: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SeekerError {
    #[error("seeker has no legal move at {0}")]
    NoLegalMove(Cell),
    #[error("seeker at {0} has neither a plan nor a legal move")]
    Stuck(Cell),
}

/// Maps each requested helper action to a repetition count in `1..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignalConvention {
    ranks: [usize; 4],
}

impl Default for SignalConvention {
    /// Right = 1, Up = 2, Left = 3, Down = 4.
    fn default() -> Self {
        SignalConvention { ranks: [1, 2, 3, 4] }
    }
}

impl SignalConvention {
    /// `ranks` is indexed by canonical action order and must be a
    /// permutation of `1..=4`.
    pub fn new(ranks: [usize; 4]) -> Option<Self> {
        let mut sorted = ranks;
        sorted.sort_unstable();
        (sorted == [1, 2, 3, 4]).then_some(SignalConvention { ranks })
    }

    pub fn rank(&self, a: Action) -> usize {
        self.ranks[a.index()]
    }

    pub fn action_for_rank(&self, rank: usize) -> Option<Action> {
        Action::ALL.into_iter().find(|&a| self.rank(a) == rank)
    }

    /// Automaton accepting exactly `rank(a)` consecutive pairs `[d, inverse(d)]`,
    /// each `d` free.
    pub fn oracle_dfa(&self, a: Action) -> Dfa {
        oracle_intent_dfa(a, self)
    }
}

/// See [`SignalConvention::oracle_dfa`]. States: `k` completed pairs
/// (`0..=r`), a pending first half for every `k < r` and direction, and a sink.
pub fn oracle_intent_dfa(a: Action, convention: &SignalConvention) -> Dfa {
    let r = convention.rank(a);
    let pending = |k: usize, d: Action| r + 1 + 4 * k + d.index();
    let sink = 5 * r + 1;
    let mut delta = vec![vec![sink; 4]; sink + 1];
    for k in 0..r {
        for d in Action::ALL {
            delta[k][d.index()] = pending(k, d);
            delta[pending(k, d)][d.inverse().index()] = k + 1;
        }
    }
    Dfa::new(Action::ALL.to_vec(), 0, [r], delta).expect("well-formed construction")
}

/// The constraints the seeker believes block the helper, with a mismatch
/// threshold before an edge is committed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallBelief {
    walls: WallSet,
    pending: BTreeMap<Edge, usize>,
    threshold: usize,
}

impl Default for WallBelief {
    fn default() -> Self {
        WallBelief::new(1)
    }
}

impl WallBelief {
    pub fn new(threshold: usize) -> Self {
        WallBelief {
            walls: WallSet::new(),
            pending: BTreeMap::new(),
            threshold: threshold.max(1),
        }
    }

    pub fn walls(&self) -> &WallSet {
        &self.walls
    }

    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }

    /// Records the outcome of a helper turn (`None` when the helper could not
    /// move). When the helper did something other than `expected`, the edge
    /// it was asked to cross from `at` is suspected. Returns `true` if the
    /// belief gained an edge.
    pub fn update(&mut self, expected: Action, observed: Option<Action>, at: Cell, size: usize) -> bool {
        if observed == Some(expected) {
            return false;
        }
        let Some(edge) = geom_next(at, expected, size).and_then(|n| Edge::new(at, n)) else {
            return false;
        };
        if self.walls.contains(edge) {
            return false;
        }
        let count = self.pending.entry(edge).or_insert(0);
        *count += 1;
        if *count >= self.threshold {
            self.pending.remove(&edge);
            self.walls.insert(edge)
        } else {
            false
        }
    }
}

/// Functional form of [`WallBelief::update`].
pub fn update_belief(
    belief: &WallBelief,
    expected: Action,
    observed: Option<Action>,
    at: Cell,
    size: usize,
) -> WallBelief {
    let mut b = belief.clone();
    b.update(expected, observed, at, size);
    b
}

/// Action sequence with the positions that cross a seeker wall.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Plan {
    pub actions: Vec<Action>,
    pub violations: Vec<usize>,
    /// `false` when no constraint-respecting path exists.
    pub found: bool,
}

impl Plan {
    pub fn no_path() -> Self {
        Plan::default()
    }

    pub fn first_violation(&self) -> Option<usize> {
        self.violations.first().copied()
    }
}

#[derive(Debug)]
struct Entry {
    f: f64,
    order: u64,
    cell: Cell,
    cost: usize,
    violations: usize,
    actions: Vec<Action>,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // min-heap on f, FIFO among equal f
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.order.cmp(&self.order))
    }
}

/// A* over the seeker's board where crossing one of its own walls is allowed
/// at an extra cost of `violation_cost`, and edges in `constraints` are never
/// crossed. Priority is `cost + violations·violation_cost + manhattan`; a
/// state is re-pushed when reached with lower cost or fewer violations than
/// the best of each seen so far. The two records are kept independently so
/// every push lowers one of them, which bounds the number of re-expansions.
///
/// Unreachable goals are rejected up front by a plain BFS.
pub fn min_violation_astar(
    size: usize,
    seeker_walls: &WallSet,
    start: Cell,
    goal: Cell,
    constraints: &WallSet,
    violation_cost: f64,
) -> Plan {
    if !reachable_under(size, start, goal, constraints) {
        return Plan::no_path();
    }
    let mut heap = BinaryHeap::new();
    let mut order = 0u64;
    heap.push(Entry {
        f: 0.0,
        order,
        cell: start,
        cost: 0,
        violations: 0,
        actions: Vec::new(),
    });
    let mut best_cost: HashMap<Cell, usize> = HashMap::from([(start, 0)]);
    let mut best_viol: HashMap<Cell, usize> = HashMap::from([(start, 0)]);

    while let Some(Entry {
        cell,
        cost,
        violations,
        actions,
        ..
    }) = heap.pop()
    {
        if cell == goal {
            let violations = violation_indices(start, &actions, size, seeker_walls);
            return Plan {
                actions,
                violations,
                found: true,
            };
        }
        for a in Action::ALL {
            let Some(next) = geom_next(cell, a, size) else {
                continue;
            };
            if constraints.blocks(cell, next) {
                continue;
            }
            let c = cost + 1;
            let v = violations + usize::from(seeker_walls.blocks(cell, next));
            let cost_improves = best_cost.get(&next).is_none_or(|&known| c < known);
            let viol_improves = best_viol.get(&next).is_none_or(|&known| v < known);
            if cost_improves || viol_improves {
                if cost_improves {
                    best_cost.insert(next, c);
                }
                if viol_improves {
                    best_viol.insert(next, v);
                }
                let f = c as f64 + v as f64 * violation_cost + next.manhattan(goal) as f64;
                let mut path = actions.clone();
                path.push(a);
                order += 1;
                heap.push(Entry {
                    f,
                    order,
                    cell: next,
                    cost: c,
                    violations: v,
                    actions: path,
                });
            }
        }
    }
    Plan::no_path()
}

fn reachable_under(size: usize, start: Cell, goal: Cell, constraints: &WallSet) -> bool {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(cell) = queue.pop_front() {
        if cell == goal {
            return true;
        }
        for a in Action::ALL {
            if let Some(next) = geom_next(cell, a, size) {
                if !constraints.blocks(cell, next) && seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    false
}

/// Positions of `actions` (replayed geometrically from `start`) that cross a wall.
pub fn violation_indices(start: Cell, actions: &[Action], size: usize, walls: &WallSet) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cell = start;
    for (i, &a) in actions.iter().enumerate() {
        let Some(next) = geom_next(cell, a, size) else {
            break;
        };
        if walls.blocks(cell, next) {
            out.push(i);
        }
        cell = next;
    }
    out
}

/// Signal segment requesting `requested` from the helper: `rank` copies of
/// `[d, inverse(d)]` where `d` is the first seeker-legal move at `at`.
pub fn encode_intent(
    requested: Action,
    at: Cell,
    cfg: &GameConfig,
    convention: &SignalConvention,
) -> Result<Vec<Action>, SeekerError> {
    let d = Action::ALL
        .into_iter()
        .find(|&d| cfg.legal(Player::Seeker, at, d))
        .ok_or(SeekerError::NoLegalMove(at))?;
    Ok((0..convention.rank(requested))
        .flat_map(|_| [d, d.inverse()])
        .collect())
}

/// One seeker turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeekerTurn {
    pub actions: Vec<Action>,
    /// Helper action the seeker is waiting for, if it signalled.
    pub expected: Option<Action>,
    /// Length of the progress prefix; the rest of `actions` is the signal.
    pub progress_len: usize,
    /// The plan ignored the belief because it admitted no path.
    pub relaxed: bool,
    pub plan: Plan,
}

#[derive(Debug, Clone)]
pub struct Seeker {
    convention: SignalConvention,
    violation_cost: f64,
    belief: WallBelief,
    signals: bool,
}

impl Default for Seeker {
    fn default() -> Self {
        Seeker::new(SignalConvention::default())
    }
}

impl Seeker {
    pub fn new(convention: SignalConvention) -> Self {
        Seeker {
            convention,
            violation_cost: DEFAULT_VIOLATION_COST,
            belief: WallBelief::default(),
            signals: true,
        }
    }

    pub fn with_violation_cost(mut self, c: f64) -> Self {
        self.violation_cost = c;
        self
    }

    pub fn with_belief_threshold(mut self, threshold: usize) -> Self {
        self.belief = WallBelief::new(threshold);
        self
    }

    /// Disables trajectory signaling, for games where the request reaches the
    /// helper through a direct channel.
    pub fn without_signals(mut self) -> Self {
        self.signals = false;
        self
    }

    pub fn convention(&self) -> &SignalConvention {
        &self.convention
    }

    pub fn belief(&self) -> &WallBelief {
        &self.belief
    }

    pub fn plan(&self, cfg: &GameConfig, from: Cell) -> Plan {
        min_violation_astar(
            cfg.size(),
            cfg.seeker_walls(),
            from,
            cfg.goal(),
            self.belief.walls(),
            self.violation_cost,
        )
    }

    /// Replans from `token`; walks the violation-free prefix and appends a
    /// signal for the first violating move.
    pub fn take_turn(&self, cfg: &GameConfig, token: Cell) -> Result<SeekerTurn, SeekerError> {
        let mut plan = self.plan(cfg, token);
        let mut relaxed = false;
        if !plan.found && token != cfg.goal() {
            plan = min_violation_astar(
                cfg.size(),
                cfg.seeker_walls(),
                token,
                cfg.goal(),
                &WallSet::new(),
                self.violation_cost,
            );
            relaxed = true;
            if !plan.found {
                return Err(SeekerError::Stuck(token));
            }
        }
        let Some(i) = plan.first_violation() else {
            return Ok(SeekerTurn {
                actions: plan.actions.clone(),
                expected: None,
                progress_len: plan.actions.len(),
                relaxed,
                plan,
            });
        };
        let prefix = &plan.actions[..i];
        let requested = plan.actions[i];
        let anchor = cfg
            .apply_seeker_sequence(token, prefix)
            .expect("plan prefix before the first violation is seeker-legal");
        let signal = if self.signals {
            match encode_intent(requested, anchor, cfg, &self.convention) {
                Ok(s) => s,
                Err(SeekerError::NoLegalMove(_)) => Vec::new(),
                Err(e) => return Err(e),
            }
        } else {
            Vec::new()
        };
        let mut actions = prefix.to_vec();
        actions.extend(signal);
        Ok(SeekerTurn {
            actions,
            expected: Some(requested),
            progress_len: i,
            relaxed,
            plan,
        })
    }

    /// Belief update after the helper answered a request made at `at`.
    pub fn observe_helper(&mut self, expected: Action, observed: Option<Action>, at: Cell, size: usize) -> bool {
        self.belief.update(expected, observed, at, size)
    }
}
