//! Learning the four intent-response automata and comparing them with the
//! seeker's own.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::automata::{jaccard, AutomataError, Word};
use crate::game::Action;
use crate::helper::IntentResponseDfas;
use crate::lstar::{BoundedEquivalence, LStar, LearnError, SamplingTeacher};
use crate::seed::mix;
use crate::seeker::SignalConvention;

pub const DEFAULT_JACCARD_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnReport {
    pub action: Action,
    pub states: usize,
    pub membership_queries: usize,
    pub equivalence_queries: usize,
    pub seconds: f64,
}

/// Learns one automaton per helper action, in parallel, with the seeker as
/// teacher: membership is answered from its signalling convention and
/// equivalence by bounded sampling.
pub fn learn_intent_dfas(
    convention: &SignalConvention,
    params: BoundedEquivalence,
    budget: usize,
) -> Result<(IntentResponseDfas, Vec<LearnReport>), LearnError> {
    let results: Vec<Result<_, LearnError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = Action::ALL
            .into_iter()
            .map(|a| {
                scope.spawn(move || {
                    let oracle = convention.oracle_dfa(a);
                    let per_action = BoundedEquivalence {
                        seed: mix(params.seed, a.index() as u64),
                        ..params
                    };
                    let mut teacher =
                        SamplingTeacher::new(|w: &[Action]| oracle.accepts(w).unwrap_or(false), per_action);
                    let started = Instant::now();
                    let learned = LStar::new(Action::ALL.to_vec())
                        .with_budget(budget)
                        .learn(&mut teacher)?;
                    let seconds = started.elapsed().as_secs_f64();
                    Ok((
                        learned.dfa.minimize(),
                        LearnReport {
                            action: a,
                            states: learned.dfa.num_states(),
                            membership_queries: learned.stats.membership_queries,
                            equivalence_queries: learned.stats.equivalence_queries,
                            seconds,
                        },
                    ))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("learner thread panicked"))
            .collect()
    });
    let mut map = BTreeMap::new();
    let mut reports = Vec::with_capacity(4);
    for r in results {
        let (dfa, report) = r?;
        map.insert(report.action, dfa);
        reports.push(report);
    }
    let dfas = IntentResponseDfas::from_map(map).expect("learned automata share the action alphabet");
    Ok((dfas, reports))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub action: Action,
    pub jaccard: f64,
    pub equivalent: bool,
    pub counterexample: Option<Word>,
}

/// Jaccard index up to `max_len` and exact equivalence for each action.
pub fn compare_dfas(
    learned: &IntentResponseDfas,
    oracle: &IntentResponseDfas,
    max_len: usize,
) -> Result<Vec<ComparisonRow>, AutomataError> {
    Action::ALL
        .into_iter()
        .map(|a| {
            let (l, o) = (learned.get(a), oracle.get(a));
            let counterexample = l.equivalent(o)?;
            Ok(ComparisonRow {
                action: a,
                jaccard: jaccard(l, o, max_len)?,
                equivalent: counterexample.is_none(),
                counterexample,
            })
        })
        .collect()
}
