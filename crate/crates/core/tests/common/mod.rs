//! Brute-force reference implementations shared by the integration tests.
//! Everything here is written independently of the library internals.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::Rng;
use tacit::game::{geom_next, Edge};
use tacit::{Action, Cell, Dfa, Trajectory, WallSet, Word};

pub const ALPHABET: [Action; 4] = Action::ALL;

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn all_words(alphabet: &[Action], max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &a in alphabet {
                let mut v: Word = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Runs a DFA given as raw tables.
pub fn raw_accepts(delta: &[Vec<usize>], accepting: &[bool], alphabet: &[Action], word: &[Action]) -> bool {
    let mut q = 0;
    for a in word {
        let s = alphabet.iter().position(|b| b == a).unwrap();
        q = delta[q][s];
    }
    accepting[q]
}

/// A random complete DFA with `1..=max_states` states, initial state 0.
pub fn random_dfa<R: Rng>(rng: &mut R, max_states: usize, alphabet: &[Action]) -> (Dfa, Vec<Vec<usize>>, Vec<bool>) {
    let n = rng.random_range(1..=max_states);
    let delta: Vec<Vec<usize>> = (0..n)
        .map(|_| (0..alphabet.len()).map(|_| rng.random_range(0..n)).collect())
        .collect();
    let accepting: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
    let dfa = Dfa::new(
        alphabet.to_vec(),
        0,
        (0..n).filter(|&q| accepting[q]),
        delta.clone(),
    )
    .unwrap();
    (dfa, delta, accepting)
}

/// Number of states of the minimal complete DFA: reachable states grouped by
/// naive pairwise distinguishability.
pub fn myhill_nerode_index(delta: &[Vec<usize>], accepting: &[bool]) -> usize {
    let k = delta.first().map_or(0, Vec::len);
    let mut reach = vec![false; delta.len()];
    let mut stack = vec![0];
    reach[0] = true;
    while let Some(q) = stack.pop() {
        for &t in &delta[q] {
            if !reach[t] {
                reach[t] = true;
                stack.push(t);
            }
        }
    }
    let states: Vec<usize> = (0..delta.len()).filter(|&q| reach[q]).collect();
    let n = delta.len();
    let mut dist = vec![vec![false; n]; n];
    for &p in &states {
        for &q in &states {
            dist[p][q] = accepting[p] != accepting[q];
        }
    }
    loop {
        let mut changed = false;
        for &p in &states {
            for &q in &states {
                if !dist[p][q] && (0..k).any(|s| dist[delta[p][s]][delta[q][s]]) {
                    dist[p][q] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut reps: Vec<usize> = Vec::new();
    for &q in &states {
        if reps.iter().all(|&r| dist[r][q]) {
            reps.push(q);
        }
    }
    reps.len()
}

/// Jaccard index of two languages restricted to words of length ≤ `max_len`,
/// by testing every word.
pub fn brute_jaccard(a: &Dfa, b: &Dfa, max_len: usize) -> f64 {
    let (mut inter, mut union) = (0usize, 0usize);
    for w in all_words(a.alphabet(), max_len) {
        let (x, y) = (a.accepts(&w).unwrap(), b.accepts(&w).unwrap());
        inter += usize::from(x && y);
        union += usize::from(x || y);
    }
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// Whether `goal` is reachable from `start` by geometric moves that never
/// cross an edge of `blocked`.
pub fn bfs_reachable(size: usize, start: Cell, goal: Cell, blocked: &WallSet) -> bool {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        if c == goal {
            return true;
        }
        for a in Action::ALL {
            if let Some(n) = geom_next(c, a, size) {
                if !blocked.blocks(c, n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
    }
    false
}

/// Union-of-legal-moves connectivity: an edge is passable unless both boards wall it.
pub fn union_connected(size: usize, seeker: &WallSet, helper: &WallSet, start: Cell, goal: Cell) -> bool {
    let both: WallSet = seeker.iter().filter(|&e| helper.contains(e)).collect();
    bfs_reachable(size, start, goal, &both)
}

/// Every shortest start→end path (as action words) in the undirected graph
/// of edges the turn walked.
pub fn all_shortest_paths(turn: &Trajectory) -> Vec<Word> {
    let states = turn.states();
    let mut adj: HashMap<Cell, BTreeSet<Cell>> = HashMap::new();
    for w in states.windows(2) {
        adj.entry(w[0]).or_default().insert(w[1]);
        adj.entry(w[1]).or_default().insert(w[0]);
    }
    let (start, end) = (turn.start(), turn.end());
    let mut dist: HashMap<Cell, usize> = HashMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for &n in adj.get(&c).into_iter().flatten() {
            if !dist.contains_key(&n) {
                dist.insert(n, dist[&c] + 1);
                queue.push_back(n);
            }
        }
    }
    let target = dist[&end];
    let mut out = Vec::new();
    let mut path = Vec::new();
    fn dfs(
        c: Cell,
        end: Cell,
        left: usize,
        adj: &HashMap<Cell, BTreeSet<Cell>>,
        path: &mut Word,
        out: &mut Vec<Word>,
    ) {
        if left == 0 {
            if c == end {
                out.push(path.clone());
            }
            return;
        }
        for &n in adj.get(&c).into_iter().flatten() {
            let a = Action::ALL
                .into_iter()
                .find(|&a| geom_next(c, a, usize::MAX) == Some(n))
                .unwrap();
            path.push(a);
            dfs(n, end, left - 1, adj, path, out);
            path.pop();
        }
    }
    dfs(start, end, target, &adj, &mut path, &mut out);
    out
}

/// Reference capping: lexicographically smallest shortest path, then the
/// pointer scan. Returns (segment actions, anchor) pairs.
pub fn reference_capping(turn: &Trajectory) -> Vec<(Word, Cell)> {
    let shortest = all_shortest_paths(turn).into_iter().min().unwrap();
    let mut path = vec![turn.start()];
    for &a in &shortest {
        let last = *path.last().unwrap();
        path.push(geom_next(last, a, usize::MAX).unwrap());
    }
    let states = turn.states();
    let mut j = 0;
    let mut out: Vec<(Word, Cell)> = Vec::new();
    let mut open = false;
    for (i, step) in turn.steps().iter().enumerate() {
        if j + 1 < path.len() && states[i] == path[j] && step.cell == path[j + 1] {
            j += 1;
            open = false;
        } else {
            if !open {
                out.push((Vec::new(), states[i]));
                open = true;
            }
            out.last_mut().unwrap().0.push(step.action);
        }
    }
    out
}

/// All interior edges of a `size`×`size` board, listed independently.
pub fn edges(size: usize) -> Vec<Edge> {
    let mut out = Vec::new();
    for r in 0..size {
        for c in 0..size {
            if c + 1 < size {
                out.push(Edge::new(Cell::new(r, c), Cell::new(r, c + 1)).unwrap());
            }
            if r + 1 < size {
                out.push(Edge::new(Cell::new(r, c), Cell::new(r + 1, c)).unwrap());
            }
        }
    }
    out
}
