//! Compares automata: exact equivalence with a shortest counterexample, and
//! Jaccard similarity of the languages up to a length bound.
//!
//! ```text
//! cargo run --release --example dfa_jaccard -- [max-len]
//! ```

use tacit::{jaccard, Action, SignalConvention};

fn main() -> anyhow::Result<()> {
    let max_len: usize = std::env::args().nth(1).map_or(Ok(8), |s| s.parse())?;
    let conv = SignalConvention::default();
    let up = conv.oracle_dfa(Action::Up);
    let flipped = up.with_flipped_state(up.accepting_states()[0]);

    for (name, other) in [
        ("up vs up", up.clone()),
        ("up vs left", conv.oracle_dfa(Action::Left)),
        ("up vs up with its accepting state flipped", flipped),
        ("up vs its complement", up.complement()),
    ] {
        let cex = up.equivalent(&other)?;
        println!(
            "{name}: jaccard {:.4}, counterexample {:?}",
            jaccard(&up, &other, max_len)?,
            cex.map(|w| w.iter().map(|a| a.name()).collect::<Vec<_>>())
        );
    }
    println!("minimal sizes: {:?}", Action::ALL.map(|a| conv.oracle_dfa(a).minimize().num_states()));
    Ok(())
}
