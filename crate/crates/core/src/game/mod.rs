//! Shared-control maze game: two players alternately move one token on a
//! square grid, each blocked by a private set of walls.

mod format;

pub use format::MazeFormatError;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A cardinal move. The derived ordering is the canonical one used for every
/// deterministic tie-break in the crate: `Right < Up < Left < Down`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Right,
    Up,
    Left,
    Down,
}

impl Action {
    pub const ALL: [Action; 4] = [Action::Right, Action::Up, Action::Left, Action::Down];

    pub fn inverse(self) -> Action {
        match self {
            Action::Right => Action::Left,
            Action::Up => Action::Down,
            Action::Left => Action::Right,
            Action::Down => Action::Up,
        }
    }

    /// Position in the canonical ordering, `0..4`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Action> {
        Action::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::Right => "right",
            Action::Up => "up",
            Action::Left => "left",
            Action::Down => "down",
        }
    }

    fn delta(self) -> (isize, isize) {
        match self {
            Action::Right => (0, 1),
            Action::Up => (-1, 0),
            Action::Left => (0, -1),
            Action::Down => (1, 0),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Action {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "right" => Ok(Action::Right),
            "up" => Ok(Action::Up),
            "left" => Ok(Action::Left),
            "down" => Ok(Action::Down),
            other => Err(format!("unknown action `{other}`")),
        }
    }
}

/// Grid coordinate, row 0 at the top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    pub fn manhattan(self, other: Cell) -> usize {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }

    pub fn in_bounds(self, size: usize) -> bool {
        self.row < size && self.col < size
    }

    /// The action moving from `self` to the orthogonal neighbour `to`.
    pub fn direction_to(self, to: Cell) -> Option<Action> {
        Action::ALL.into_iter().find(|&a| {
            let (dr, dc) = a.delta();
            self.row.checked_add_signed(dr) == Some(to.row)
                && self.col.checked_add_signed(dc) == Some(to.col)
        })
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl From<(usize, usize)> for Cell {
    fn from((row, col): (usize, usize)) -> Self {
        Cell { row, col }
    }
}

/// Orthogonal neighbour of `cell` in direction `a`, or `None` off the board.
pub fn geom_next(cell: Cell, a: Action, size: usize) -> Option<Cell> {
    let (dr, dc) = a.delta();
    let row = cell.row.checked_add_signed(dr)?;
    let col = cell.col.checked_add_signed(dc)?;
    let next = Cell { row, col };
    next.in_bounds(size).then_some(next)
}

/// Undirected edge between orthogonally adjacent cells, smaller cell first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(Cell, Cell);

impl Edge {
    /// Returns `None` unless the cells are at Manhattan distance 1.
    pub fn new(a: Cell, b: Cell) -> Option<Edge> {
        if a.manhattan(b) != 1 {
            return None;
        }
        Some(if a <= b { Edge(a, b) } else { Edge(b, a) })
    }

    pub fn cells(self) -> (Cell, Cell) {
        (self.0, self.1)
    }

    pub fn in_bounds(self, size: usize) -> bool {
        self.0.in_bounds(size) && self.1.in_bounds(size)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Set of interior walls. The outer border is implicit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WallSet {
    edges: BTreeSet<Edge>,
}

impl WallSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if the edge was already present.
    pub fn insert(&mut self, edge: Edge) -> bool {
        self.edges.insert(edge)
    }

    pub fn contains(&self, edge: Edge) -> bool {
        self.edges.contains(&edge)
    }

    pub fn blocks(&self, a: Cell, b: Cell) -> bool {
        Edge::new(a, b).is_some_and(|e| self.edges.contains(&e))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }
}

impl FromIterator<Edge> for WallSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        WallSet {
            edges: iter.into_iter().collect(),
        }
    }
}

/// Every interior edge of a `size`×`size` board, in canonical order.
pub fn interior_edges(size: usize) -> Vec<Edge> {
    let mut out = Vec::with_capacity(2 * size * size.saturating_sub(1));
    for row in 0..size {
        for col in 0..size {
            let c = Cell::new(row, col);
            for a in [Action::Right, Action::Down] {
                if let Some(n) = geom_next(c, a, size) {
                    out.push(Edge(c, n));
                }
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Seeker,
    Helper,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Seeker => Player::Helper,
            Player::Helper => Player::Seeker,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("board size {0} is below the minimum of 2")]
    SizeTooSmall(usize),
    #[error("cell {0} is outside the board")]
    OutOfBounds(Cell),
    #[error("wall {0} does not join two in-bounds adjacent cells")]
    InvalidWall(Edge),
    #[error("initial cell and goal coincide at {0}")]
    InitIsGoal(Cell),
    #[error("goal {goal} is unreachable from {init} even with both players cooperating")]
    Disconnected { init: Cell, goal: Cell },
    #[error("move {0} of the sequence crosses a seeker wall or the border")]
    IllegalMove(usize),
}

/// A shared-control game instance: board, private wall layouts, start and goal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameConfig {
    size: usize,
    seeker_walls: WallSet,
    helper_walls: WallSet,
    init: Cell,
    goal: Cell,
}

impl GameConfig {
    /// Validates every board invariant, including cooperative reachability.
    pub fn new(
        size: usize,
        seeker_walls: WallSet,
        helper_walls: WallSet,
        init: Cell,
        goal: Cell,
    ) -> Result<Self, GameError> {
        if size < 2 {
            return Err(GameError::SizeTooSmall(size));
        }
        for c in [init, goal] {
            if !c.in_bounds(size) {
                return Err(GameError::OutOfBounds(c));
            }
        }
        for e in seeker_walls.iter().chain(helper_walls.iter()) {
            if !e.in_bounds(size) {
                return Err(GameError::InvalidWall(e));
            }
        }
        if init == goal {
            return Err(GameError::InitIsGoal(init));
        }
        let cfg = GameConfig {
            size,
            seeker_walls,
            helper_walls,
            init,
            goal,
        };
        if !cfg.union_reachable(init).contains(&goal) {
            return Err(GameError::Disconnected { init, goal });
        }
        Ok(cfg)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn seeker_walls(&self) -> &WallSet {
        &self.seeker_walls
    }

    pub fn helper_walls(&self) -> &WallSet {
        &self.helper_walls
    }

    pub fn walls(&self, player: Player) -> &WallSet {
        match player {
            Player::Seeker => &self.seeker_walls,
            Player::Helper => &self.helper_walls,
        }
    }

    pub fn init(&self) -> Cell {
        self.init
    }

    pub fn goal(&self) -> Cell {
        self.goal
    }

    /// Same layout with a different goal.
    pub fn with_goal(&self, goal: Cell) -> Result<GameConfig, GameError> {
        GameConfig::new(
            self.size,
            self.seeker_walls.clone(),
            self.helper_walls.clone(),
            self.init,
            goal,
        )
    }

    pub fn legal(&self, player: Player, cell: Cell, a: Action) -> bool {
        self.transition(player, cell, a).is_some()
    }

    /// The partial transition function of `player`.
    pub fn transition(&self, player: Player, cell: Cell, a: Action) -> Option<Cell> {
        let next = geom_next(cell, a, self.size)?;
        (!self.walls(player).blocks(cell, next)).then_some(next)
    }

    pub fn legal_actions(&self, player: Player, cell: Cell) -> Vec<Action> {
        Action::ALL
            .into_iter()
            .filter(|&a| self.legal(player, cell, a))
            .collect()
    }

    /// Folds the seeker transition over `seq`.
    pub fn apply_seeker_sequence(&self, start: Cell, seq: &[Action]) -> Result<Cell, GameError> {
        seq.iter().enumerate().try_fold(start, |cell, (i, &a)| {
            self.transition(Player::Seeker, cell, a)
                .ok_or(GameError::IllegalMove(i))
        })
    }

    /// Cells reachable from `from` when an edge is passable for at least one player.
    pub fn union_reachable(&self, from: Cell) -> BTreeSet<Cell> {
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(c) = queue.pop_front() {
            for a in Action::ALL {
                let Some(n) = geom_next(c, a, self.size) else {
                    continue;
                };
                let passable =
                    !self.seeker_walls.blocks(c, n) || !self.helper_walls.blocks(c, n);
                if passable && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen
    }

    pub fn to_maze_text(&self) -> String {
        format::write_maze(self)
    }

    pub fn from_maze_text(text: &str) -> Result<Self, MazeFormatError> {
        format::parse_maze(text)
    }
}

/// Reward of one primitive action by either player.
pub fn step_reward() -> f64 {
    -1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameState {
    pub token: Cell,
    pub turn: Player,
    pub steps_taken: usize,
}

impl GameState {
    pub fn initial(cfg: &GameConfig) -> Self {
        GameState {
            token: cfg.init(),
            turn: Player::Seeker,
            steps_taken: 0,
        }
    }

    pub fn cumulative_reward(&self) -> f64 {
        self.steps_taken as f64 * step_reward()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrajectoryStep {
    pub agent: Player,
    pub action: Action,
    pub cell: Cell,
}

/// Ordered record of executed moves, starting from a known cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    start: Cell,
    steps: Vec<TrajectoryStep>,
}

impl Trajectory {
    pub fn new(start: Cell) -> Self {
        Trajectory {
            start,
            steps: Vec::new(),
        }
    }

    /// Builds a seeker-only trajectory by replaying `actions` geometrically.
    /// Returns `None` if a move leaves the board.
    pub fn from_actions(start: Cell, actions: &[Action], size: usize) -> Option<Self> {
        let mut t = Trajectory::new(start);
        for &a in actions {
            let next = geom_next(t.end(), a, size)?;
            t.push(Player::Seeker, a, next);
        }
        Some(t)
    }

    /// Appends a step. Panics if `cell` is not adjacent to the current end.
    pub fn push(&mut self, agent: Player, action: Action, cell: Cell) {
        assert_eq!(
            self.end().direction_to(cell),
            Some(action),
            "trajectory step must move one cell in the stated direction"
        );
        self.steps.push(TrajectoryStep {
            agent,
            action,
            cell,
        });
    }

    pub fn start(&self) -> Cell {
        self.start
    }

    pub fn end(&self) -> Cell {
        self.steps.last().map_or(self.start, |s| s.cell)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[TrajectoryStep] {
        &self.steps
    }

    pub fn actions(&self) -> Vec<Action> {
        self.steps.iter().map(|s| s.action).collect()
    }

    /// Start cell followed by the cell after every step.
    pub fn states(&self) -> Vec<Cell> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|s| s.cell))
            .collect()
    }
}
