//! Learns the four intent-response automata with L* and checks them
//! against the signalling convention they were learned from.
//!
//! ```text
//! cargo run --release --example learn_intent_dfas -- [seed] [bound]
//! ```

use tacit::harness::{compare_dfas, learn_intent_dfas};
use tacit::lstar::{BoundedEquivalence, DEFAULT_QUERY_BUDGET};
use tacit::{IntentResponseDfas, SignalConvention};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed: u64 = args.first().map_or(Ok(0), |s| s.parse())?;
    let bound: usize = args.get(1).map_or(Ok(2000), |s| s.parse())?;

    let conv = SignalConvention::default();
    let params = BoundedEquivalence {
        bound,
        max_len: 12,
        seed,
        ..BoundedEquivalence::default()
    };
    let (learned, reports) = learn_intent_dfas(&conv, params, DEFAULT_QUERY_BUDGET)?;
    for r in &reports {
        println!(
            "{:<5} {:>3} states  {:>6} membership  {:>2} equivalence  {:.2}s",
            r.action.to_string(),
            r.states,
            r.membership_queries,
            r.equivalence_queries,
            r.seconds
        );
    }
    for row in compare_dfas(&learned, &IntentResponseDfas::oracles(&conv), 8)? {
        println!(
            "{:<5} jaccard {:.4} equivalent {} {}",
            row.action.to_string(),
            row.jaccard,
            row.equivalent,
            row.counterexample.map_or(String::new(), |w| format!("counterexample {w:?}"))
        );
    }
    Ok(())
}
