//! Deterministic finite automata over seeker actions.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::game::Action;

/// A finite sequence of symbols.
pub type Word = Vec<Action>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("symbol at position {0} is not in the alphabet")]
    UnknownSymbol(usize),
    #[error("automata have different alphabets")]
    AlphabetMismatch,
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("malformed automaton file: {0}")]
    Parse(String),
}

/// Complete DFA. `delta` is row-major: `delta[state * |alphabet| + symbol]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Vec<Action>,
    initial: usize,
    accepting: Vec<bool>,
    delta: Vec<usize>,
}

impl Dfa {
    pub fn new(
        alphabet: Vec<Action>,
        initial: usize,
        accepting: impl IntoIterator<Item = usize>,
        delta: Vec<Vec<usize>>,
    ) -> Result<Self, AutomataError> {
        let n = delta.len();
        let k = alphabet.len();
        if n == 0 {
            return Err(AutomataError::Invalid("no states".into()));
        }
        if alphabet.iter().collect::<BTreeSet<_>>().len() != k {
            return Err(AutomataError::Invalid("repeated alphabet symbol".into()));
        }
        if initial >= n {
            return Err(AutomataError::Invalid(format!("initial state {initial} out of range")));
        }
        let mut acc = vec![false; n];
        for q in accepting {
            *acc.get_mut(q)
                .ok_or_else(|| AutomataError::Invalid(format!("accepting state {q} out of range")))? =
                true;
        }
        let mut flat = Vec::with_capacity(n * k);
        for (q, row) in delta.into_iter().enumerate() {
            if row.len() != k {
                return Err(AutomataError::Invalid(format!(
                    "state {q} has {} transitions, expected {k}",
                    row.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(AutomataError::Invalid(format!("transition target {t} out of range")));
            }
            flat.extend(row);
        }
        Ok(Dfa {
            alphabet,
            initial,
            accepting: acc,
            delta: flat,
        })
    }

    /// One non-accepting state looping on every symbol.
    pub fn empty_language(alphabet: Vec<Action>) -> Self {
        let k = alphabet.len();
        Dfa {
            alphabet,
            initial: 0,
            accepting: vec![false],
            delta: vec![0; k],
        }
    }

    /// Accepts every word.
    pub fn universal(alphabet: Vec<Action>) -> Self {
        let mut d = Dfa::empty_language(alphabet);
        d.accepting[0] = true;
        d
    }

    /// Trie automaton accepting exactly `words`.
    pub fn from_words<'a>(
        alphabet: Vec<Action>,
        words: impl IntoIterator<Item = &'a [Action]>,
    ) -> Result<Self, AutomataError> {
        let k = alphabet.len();
        // state 0 is the sink
        let mut delta = vec![vec![0; k], vec![0; k]];
        let mut accepting = BTreeSet::new();
        for w in words {
            let mut q = 1;
            for (i, a) in w.iter().enumerate() {
                let s = alphabet
                    .iter()
                    .position(|b| b == a)
                    .ok_or(AutomataError::UnknownSymbol(i))?;
                if delta[q][s] == 0 {
                    delta.push(vec![0; k]);
                    delta[q][s] = delta.len() - 1;
                }
                q = delta[q][s];
            }
            accepting.insert(q);
        }
        Dfa::new(alphabet, 1, accepting, delta)
    }

    pub fn alphabet(&self) -> &[Action] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&q| self.accepting[q]).collect()
    }

    pub fn symbol_index(&self, a: Action) -> Option<usize> {
        self.alphabet.iter().position(|&b| b == a)
    }

    /// Transition by symbol index.
    pub fn step(&self, q: usize, symbol: usize) -> usize {
        self.delta[q * self.alphabet.len() + symbol]
    }

    pub fn run(&self, word: &[Action]) -> Result<usize, AutomataError> {
        word.iter().enumerate().try_fold(self.initial, |q, (i, &a)| {
            let s = self.symbol_index(a).ok_or(AutomataError::UnknownSymbol(i))?;
            Ok(self.step(q, s))
        })
    }

    pub fn accepts(&self, word: &[Action]) -> Result<bool, AutomataError> {
        self.run(word).map(|q| self.accepting[q])
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        d.accepting.iter_mut().for_each(|b| *b = !*b);
        d
    }

    /// Copy with the acceptance of `state` flipped.
    pub fn with_flipped_state(&self, state: usize) -> Dfa {
        let mut d = self.clone();
        d.accepting[state] = !d.accepting[state];
        d
    }

    /// All accepted words of length at most `max_len`.
    pub fn enumerate_accepted(&self, max_len: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut word = Vec::with_capacity(max_len);
        self.enumerate_from(self.initial, max_len, &mut word, &mut out);
        out
    }

    fn enumerate_from(&self, q: usize, budget: usize, word: &mut Word, out: &mut BTreeSet<Word>) {
        if self.accepting[q] {
            out.insert(word.clone());
        }
        if budget == 0 {
            return;
        }
        for (s, &a) in self.alphabet.iter().enumerate() {
            word.push(a);
            self.enumerate_from(self.step(q, s), budget - 1, word, out);
            word.pop();
        }
    }

    /// Shortest word on which the two automata disagree, `None` if the
    /// languages are equal. Ties are broken by alphabet order.
    pub fn equivalent(&self, other: &Dfa) -> Result<Option<Word>, AutomataError> {
        if self.alphabet != other.alphabet {
            return Err(AutomataError::AlphabetMismatch);
        }
        let start = (self.initial, other.initial);
        let mut parent: HashMap<(usize, usize), Option<((usize, usize), usize)>> =
            HashMap::from([(start, None)]);
        let mut queue = VecDeque::from([start]);
        while let Some(pair @ (p, q)) = queue.pop_front() {
            if self.accepting[p] != other.accepting[q] {
                let mut word = Vec::new();
                let mut cur = pair;
                while let Some((prev, s)) = parent[&cur] {
                    word.push(self.alphabet[s]);
                    cur = prev;
                }
                word.reverse();
                return Ok(Some(word));
            }
            for s in 0..self.alphabet.len() {
                let next = (self.step(p, s), other.step(q, s));
                parent.entry(next).or_insert_with(|| {
                    queue.push_back(next);
                    Some((pair, s))
                });
            }
        }
        Ok(None)
    }

    fn reachable(&self) -> Vec<usize> {
        let k = self.alphabet.len();
        let mut order = vec![self.initial];
        let mut seen = vec![false; self.num_states()];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for s in 0..k {
                let t = self.step(q, s);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Minimal equivalent DFA with states numbered in breadth-first order
    /// from the initial state. Equal languages give identical values.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let reach = self.reachable();
        let mut block: HashMap<usize, usize> = reach
            .iter()
            .map(|&q| (q, usize::from(self.accepting[q])))
            .collect();
        let mut num_blocks = block.values().collect::<BTreeSet<_>>().len();
        // Moore refinement: split by (own block, successor blocks) until stable.
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next_block = HashMap::with_capacity(reach.len());
            for &q in &reach {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(block[&q]);
                sig.extend((0..k).map(|s| block[&self.step(q, s)]));
                let fresh = ids.len();
                next_block.insert(q, *ids.entry(sig).or_insert(fresh));
            }
            let n = ids.len();
            block = next_block;
            if n == num_blocks {
                break;
            }
            num_blocks = n;
        }

        // Renumber blocks in BFS order.
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for &q in &reach {
            rep.entry(block[&q]).or_insert(q);
        }
        let mut number: HashMap<usize, usize> = HashMap::from([(block[&self.initial], 0)]);
        let mut order = vec![block[&self.initial]];
        let mut i = 0;
        while i < order.len() {
            let q = rep[&order[i]];
            for s in 0..k {
                let b = block[&self.step(q, s)];
                if let Entry::Vacant(v) = number.entry(b) {
                    v.insert(order.len());
                    order.push(b);
                }
            }
            i += 1;
        }
        let mut delta = Vec::with_capacity(order.len() * k);
        let mut accepting = Vec::with_capacity(order.len());
        for &b in &order {
            let q = rep[&b];
            accepting.push(self.accepting[q]);
            delta.extend((0..k).map(|s| number[&block[&self.step(q, s)]]));
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            initial: 0,
            accepting,
            delta,
        }
    }

    /// Structured-text form with one transition row per line.
    pub fn to_text(&self) -> String {
        let k = self.alphabet.len();
        let names: Vec<String> = self
            .alphabet
            .iter()
            .map(|a| format!("\"{}\"", a.name()))
            .collect();
        let accepting: Vec<String> = self.accepting_states().iter().map(|q| q.to_string()).collect();
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"alphabet\": [{}],", names.join(", "));
        let _ = writeln!(out, "  \"num_states\": {},", self.num_states());
        let _ = writeln!(out, "  \"q0\": {},", self.initial);
        let _ = writeln!(out, "  \"accepting\": [{}],", accepting.join(", "));
        out.push_str("  \"delta\": [\n");
        for q in 0..self.num_states() {
            let row: Vec<String> = self.delta[q * k..(q + 1) * k]
                .iter()
                .map(|t| t.to_string())
                .collect();
            let sep = if q + 1 < self.num_states() { "," } else { "" };
            let _ = writeln!(out, "    [{}]{sep}", row.join(", "));
        }
        out.push_str("  ]\n}\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Dfa, AutomataError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            alphabet: Vec<String>,
            num_states: usize,
            q0: usize,
            accepting: Vec<usize>,
            delta: Vec<Vec<usize>>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| AutomataError::Parse(e.to_string()))?;
        let alphabet = raw
            .alphabet
            .iter()
            .map(|s| s.parse::<Action>().map_err(AutomataError::Parse))
            .collect::<Result<Vec<_>, _>>()?;
        if raw.delta.len() != raw.num_states {
            return Err(AutomataError::Parse(format!(
                "num_states is {} but delta has {} rows",
                raw.num_states,
                raw.delta.len()
            )));
        }
        Dfa::new(alphabet, raw.q0, raw.accepting, raw.delta)
    }
}

/// Jaccard index of the accepted-word sets up to `max_len`; 1 when both are empty.
pub fn jaccard(d1: &Dfa, d2: &Dfa, max_len: usize) -> Result<f64, AutomataError> {
    if d1.alphabet != d2.alphabet {
        return Err(AutomataError::AlphabetMismatch);
    }
    let a = d1.enumerate_accepted(max_len);
    let b = d2.enumerate_accepted(max_len);
    let inter = a.intersection(&b).count();
    let union = a.len() + b.len() - inter;
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Action::*;

    fn even_rights() -> Dfa {
        Dfa::new(
            Action::ALL.to_vec(),
            0,
            [0],
            vec![vec![1, 0, 0, 0], vec![0, 1, 1, 1]],
        )
        .unwrap()
    }

    #[test]
    fn accepts_and_rejects() {
        let d = even_rights();
        assert_eq!(d.accepts(&[]), Ok(true));
        assert_eq!(d.accepts(&[Right, Up]), Ok(false));
        assert_eq!(d.accepts(&[Right, Up, Right]), Ok(true));
        let small = Dfa::universal(vec![Right, Up]);
        assert_eq!(small.accepts(&[Right, Down]), Err(AutomataError::UnknownSymbol(1)));
    }

    #[test]
    fn constructor_validates() {
        let al = Action::ALL.to_vec();
        assert!(Dfa::new(al.clone(), 0, [], vec![]).is_err());
        assert!(Dfa::new(al.clone(), 1, [], vec![vec![0; 4]]).is_err());
        assert!(Dfa::new(al.clone(), 0, [3], vec![vec![0; 4]]).is_err());
        assert!(Dfa::new(al.clone(), 0, [], vec![vec![0; 3]]).is_err());
        assert!(Dfa::new(al, 0, [], vec![vec![0, 0, 0, 9]]).is_err());
    }

    #[test]
    fn jaccard_examples() {
        let al = Action::ALL.to_vec();
        let l1 = Dfa::from_words(al.clone(), [&[Right][..]]).unwrap();
        let l2 = Dfa::from_words(al.clone(), [&[Right][..], &[Up][..]]).unwrap();
        assert_eq!(jaccard(&l1, &l2, 1), Ok(0.5));
        assert_eq!(jaccard(&l1, &l1, 4), Ok(1.0));
        let l3 = Dfa::from_words(al.clone(), [&[Left][..]]).unwrap();
        assert_eq!(jaccard(&l1, &l3, 3), Ok(0.0));
        let e = Dfa::empty_language(al.clone());
        assert_eq!(jaccard(&e, &e, 3), Ok(1.0));
        assert_eq!(
            jaccard(&l1, &Dfa::universal(vec![Right]), 2),
            Err(AutomataError::AlphabetMismatch)
        );
    }

    #[test]
    fn equivalence_examples() {
        let al = Action::ALL.to_vec();
        let d = even_rights();
        assert_eq!(d.equivalent(&d), Ok(None));
        assert_eq!(
            Dfa::universal(al.clone()).equivalent(&Dfa::empty_language(al.clone())),
            Ok(Some(vec![]))
        );
        assert_eq!(
            d.equivalent(&d.with_flipped_state(1)),
            Ok(Some(vec![Right]))
        );
    }

    #[test]
    fn minimize_collapses_and_canonicalizes() {
        // Two copies of the even-Rights automaton glued together.
        let d = Dfa::new(
            Action::ALL.to_vec(),
            2,
            [0, 2],
            vec![
                vec![1, 0, 0, 0],
                vec![2, 1, 1, 1],
                vec![3, 2, 2, 2],
                vec![0, 3, 3, 3],
            ],
        )
        .unwrap();
        let m = d.minimize();
        assert_eq!(m.num_states(), 2);
        assert_eq!(m, even_rights().minimize());
        assert_eq!(m.equivalent(&d), Ok(None));
        assert_eq!(Dfa::from_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let d = even_rights();
        let text = d.to_text();
        assert!(text.contains("\"alphabet\": [\"right\", \"up\", \"left\", \"down\"]"));
        assert_eq!(Dfa::from_text(&text).unwrap(), d);
        let bad = text.replace("\"num_states\": 2", "\"num_states\": 3");
        assert!(matches!(Dfa::from_text(&bad), Err(AutomataError::Parse(_))));
        let bad = text.replace("\"up\"", "\"north\"");
        assert!(matches!(Dfa::from_text(&bad), Err(AutomataError::Parse(_))));
    }
}
