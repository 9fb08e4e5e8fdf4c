//! Angluin-style active learning of DFAs from membership and equivalence
//! queries, plus a sampling approximation of the equivalence query.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automata::{Dfa, Word};
use crate::game::Action;
use crate::seed::mix;

pub const DEFAULT_QUERY_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearnError {
    #[error("membership query budget of {0} exhausted")]
    QueryBudgetExceeded(usize),
}

/// The party answering the learner's questions.
pub trait Teacher {
    /// Must be a pure function of `word`.
    fn membership(&mut self, word: &[Action]) -> bool;

    /// `None` accepts the hypothesis; otherwise a word it misclassifies.
    fn equivalence(&mut self, hypothesis: &Dfa) -> Option<Word>;
}

impl<T: Teacher + ?Sized> Teacher for &mut T {
    fn membership(&mut self, word: &[Action]) -> bool {
        (**self).membership(word)
    }

    fn equivalence(&mut self, hypothesis: &Dfa) -> Option<Word> {
        (**self).equivalence(hypothesis)
    }
}

/// Teacher backed by a known target automaton with exact equivalence.
#[derive(Debug, Clone)]
pub struct ExactTeacher {
    target: Dfa,
}

impl ExactTeacher {
    pub fn new(target: Dfa) -> Self {
        ExactTeacher { target }
    }
}

impl Teacher for ExactTeacher {
    fn membership(&mut self, word: &[Action]) -> bool {
        self.target.accepts(word).unwrap_or(false)
    }

    fn equivalence(&mut self, hypothesis: &Dfa) -> Option<Word> {
        self.target
            .equivalent(hypothesis)
            .expect("hypothesis shares the target alphabet")
    }
}

/// Parameters of the sampled equivalence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedEquivalence {
    /// Random words probed after the exhaustive phase.
    pub bound: usize,
    /// Longest word probed.
    pub max_len: usize,
    /// Cap on the exhaustive phase.
    pub exhaustive_cap: usize,
    pub seed: u64,
}

impl Default for BoundedEquivalence {
    fn default() -> Self {
        BoundedEquivalence {
            bound: 2000,
            max_len: 12,
            exhaustive_cap: DEFAULT_QUERY_BUDGET,
            seed: 0,
        }
    }
}

/// Compares `hypothesis` with `membership` on a bounded set of words: first
/// every word up to length `min(max_len, 2·|alphabet|)` (at most
/// `exhaustive_cap` of them), then `bound` random words of uniformly random
/// length up to `max_len`. Returns the first disagreement.
pub fn bounded_equivalence(
    hypothesis: &Dfa,
    membership: &mut dyn FnMut(&[Action]) -> bool,
    params: &BoundedEquivalence,
) -> Option<Word> {
    let alphabet = hypothesis.alphabet();
    let k = alphabet.len();
    let disagrees = |w: &[Action], m: &mut dyn FnMut(&[Action]) -> bool| {
        hypothesis.accepts(w).unwrap_or(false) != m(w)
    };

    let mut probes = 0usize;
    let exhaustive_len = params.max_len.min(2 * k);
    'lengths: for len in 0..=exhaustive_len {
        let mut digits = vec![0usize; len];
        loop {
            if probes >= params.exhaustive_cap {
                break 'lengths;
            }
            let word: Word = digits.iter().map(|&d| alphabet[d]).collect();
            probes += 1;
            if disagrees(&word, membership) {
                return Some(word);
            }
            // odometer increment, last position fastest
            let mut i = len;
            loop {
                if i == 0 {
                    continue 'lengths;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < k {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    if k == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.bound {
        let len = rng.random_range(0..=params.max_len);
        let word: Word = (0..len).map(|_| alphabet[rng.random_range(0..k)]).collect();
        if disagrees(&word, membership) {
            return Some(word);
        }
    }
    None
}

/// Teacher that answers membership with a closure and approximates
/// equivalence with [`bounded_equivalence`]. Each equivalence call draws from
/// a fresh stream derived from the base seed and the call index.
pub struct SamplingTeacher<F> {
    membership: F,
    params: BoundedEquivalence,
    calls: u64,
}

impl<F: FnMut(&[Action]) -> bool> SamplingTeacher<F> {
    pub fn new(membership: F, params: BoundedEquivalence) -> Self {
        SamplingTeacher {
            membership,
            params,
            calls: 0,
        }
    }
}

impl<F: FnMut(&[Action]) -> bool> Teacher for SamplingTeacher<F> {
    fn membership(&mut self, word: &[Action]) -> bool {
        (self.membership)(word)
    }

    fn equivalence(&mut self, hypothesis: &Dfa) -> Option<Word> {
        let params = BoundedEquivalence {
            seed: mix(self.params.seed, self.calls),
            ..self.params
        };
        self.calls += 1;
        bounded_equivalence(hypothesis, &mut self.membership, &params)
    }
}

/// Observation table: access words `S`, distinguishing suffixes `E`, and the
/// membership answers for every `S ∪ S·Σ` row and `E` column.
#[derive(Debug, Clone)]
pub struct ObservationTable {
    alphabet: Vec<Action>,
    prefixes: Vec<Word>,
    prefix_set: BTreeSet<Word>,
    suffixes: Vec<Word>,
    answers: HashMap<Word, bool>,
    queries: usize,
    budget: usize,
}

impl ObservationTable {
    pub fn new(alphabet: Vec<Action>, budget: usize) -> Self {
        ObservationTable {
            alphabet,
            prefixes: vec![vec![]],
            prefix_set: BTreeSet::from([vec![]]),
            suffixes: vec![vec![]],
            answers: HashMap::new(),
            queries: 0,
            budget,
        }
    }

    pub fn prefixes(&self) -> &[Word] {
        &self.prefixes
    }

    pub fn suffixes(&self) -> &[Word] {
        &self.suffixes
    }

    /// Distinct membership queries sent to the teacher so far.
    pub fn membership_queries(&self) -> usize {
        self.queries
    }

    fn query(&mut self, teacher: &mut dyn Teacher, word: Word) -> Result<(), LearnError> {
        if self.answers.contains_key(&word) {
            return Ok(());
        }
        if self.queries >= self.budget {
            return Err(LearnError::QueryBudgetExceeded(self.budget));
        }
        self.queries += 1;
        let answer = teacher.membership(&word);
        self.answers.insert(word, answer);
        Ok(())
    }

    fn rows_to_fill(&self) -> Vec<Word> {
        let mut rows = self.prefixes.clone();
        for s in &self.prefixes {
            for &a in &self.alphabet {
                let mut w = s.clone();
                w.push(a);
                rows.push(w);
            }
        }
        rows
    }

    /// Queries every missing cell.
    pub fn fill(&mut self, teacher: &mut dyn Teacher) -> Result<(), LearnError> {
        for row in self.rows_to_fill() {
            for e in self.suffixes.clone() {
                let mut w = row.clone();
                w.extend_from_slice(&e);
                self.query(teacher, w)?;
            }
        }
        Ok(())
    }

    /// Row signature of `word`; the table must be filled for it.
    pub fn row(&self, word: &[Action]) -> Vec<bool> {
        self.suffixes
            .iter()
            .map(|e| {
                let mut w = word.to_vec();
                w.extend_from_slice(e);
                self.answers[&w]
            })
            .collect()
    }

    fn extend(word: &[Action], a: Action) -> Word {
        let mut w = word.to_vec();
        w.push(a);
        w
    }

    /// A one-letter extension whose row matches no access word.
    pub fn find_unclosed(&self) -> Option<Word> {
        let rows: BTreeSet<Vec<bool>> = self.prefixes.iter().map(|s| self.row(s)).collect();
        self.prefixes.iter().find_map(|s| {
            self.alphabet.iter().find_map(|&a| {
                let w = Self::extend(s, a);
                (!rows.contains(&self.row(&w))).then_some(w)
            })
        })
    }

    /// A new suffix `a·e` separating two access words with equal rows.
    pub fn find_inconsistency(&self) -> Option<Word> {
        for (i, s1) in self.prefixes.iter().enumerate() {
            let r1 = self.row(s1);
            for s2 in &self.prefixes[i + 1..] {
                if self.row(s2) != r1 {
                    continue;
                }
                for &a in &self.alphabet {
                    let x1 = Self::extend(s1, a);
                    let x2 = Self::extend(s2, a);
                    for e in &self.suffixes {
                        let mut w1 = x1.clone();
                        w1.extend_from_slice(e);
                        let mut w2 = x2.clone();
                        w2.extend_from_slice(e);
                        if self.answers[&w1] != self.answers[&w2] {
                            let mut suffix = vec![a];
                            suffix.extend_from_slice(e);
                            return Some(suffix);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_closed(&self) -> bool {
        self.find_unclosed().is_none()
    }

    pub fn is_consistent(&self) -> bool {
        self.find_inconsistency().is_none()
    }

    fn add_prefix(&mut self, w: Word) -> bool {
        if self.prefix_set.insert(w.clone()) {
            self.prefixes.push(w);
            true
        } else {
            false
        }
    }

    /// Fills, then repairs closedness and consistency until both hold.
    pub fn stabilize(&mut self, teacher: &mut dyn Teacher) -> Result<(), LearnError> {
        loop {
            self.fill(teacher)?;
            if let Some(w) = self.find_unclosed() {
                self.add_prefix(w);
                continue;
            }
            if let Some(e) = self.find_inconsistency() {
                self.suffixes.push(e);
                continue;
            }
            return Ok(());
        }
    }

    /// Adds every prefix of `cex` to `S`. Returns how many were new.
    pub fn add_counterexample(&mut self, cex: &[Action]) -> usize {
        (0..=cex.len())
            .filter(|&i| self.add_prefix(cex[..i].to_vec()))
            .count()
    }

    /// Hypothesis automaton of a closed and consistent table.
    pub fn hypothesis(&self) -> Dfa {
        let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut reps = Vec::new();
        for s in &self.prefixes {
            let r = self.row(s);
            if let Entry::Vacant(v) = index.entry(r) {
                v.insert(reps.len());
                reps.push(s.clone());
            }
        }
        let accepting: Vec<usize> = reps
            .iter()
            .enumerate()
            .filter(|(_, s)| self.answers[*s])
            .map(|(i, _)| i)
            .collect();
        let delta = reps
            .iter()
            .map(|s| {
                self.alphabet
                    .iter()
                    .map(|&a| index[&self.row(&Self::extend(s, a))])
                    .collect()
            })
            .collect();
        let initial = index[&self.row(&[])];
        Dfa::new(self.alphabet.clone(), initial, accepting, delta)
            .expect("closed table yields a complete automaton")
    }
}

/// Processes a counterexample and restores closedness and consistency.
pub fn handle_counterexample(
    table: &mut ObservationTable,
    teacher: &mut dyn Teacher,
    cex: &[Action],
) -> Result<(), LearnError> {
    table.add_counterexample(cex);
    table.stabilize(teacher)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LearnStats {
    pub membership_queries: usize,
    pub equivalence_queries: usize,
    pub max_hypothesis_states: usize,
}

#[derive(Debug, Clone)]
pub struct Learned {
    pub dfa: Dfa,
    pub stats: LearnStats,
}

/// L* with all-prefix counterexample processing.
#[derive(Debug, Clone)]
pub struct LStar {
    alphabet: Vec<Action>,
    budget: usize,
}

impl LStar {
    pub fn new(alphabet: Vec<Action>) -> Self {
        LStar {
            alphabet,
            budget: DEFAULT_QUERY_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn learn(&self, teacher: &mut dyn Teacher) -> Result<Learned, LearnError> {
        let mut table = ObservationTable::new(self.alphabet.clone(), self.budget);
        table.stabilize(teacher)?;
        let mut stats = LearnStats::default();
        loop {
            let hypothesis = table.hypothesis();
            stats.max_hypothesis_states = stats.max_hypothesis_states.max(hypothesis.num_states());
            stats.equivalence_queries += 1;
            match teacher.equivalence(&hypothesis) {
                None => {
                    stats.membership_queries = table.membership_queries();
                    return Ok(Learned {
                        dfa: hypothesis,
                        stats,
                    });
                }
                Some(cex) => handle_counterexample(&mut table, teacher, &cex)?,
            }
        }
    }
}

/// Convenience wrapper: learn with default budget.
pub fn lstar_learn(teacher: &mut dyn Teacher, alphabet: &[Action]) -> Result<Dfa, LearnError> {
    LStar::new(alphabet.to_vec()).learn(teacher).map(|l| l.dfa)
}
