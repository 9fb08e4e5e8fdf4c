//! Coordination without communication in shared-control maze games.
//!
//! A *seeker* who knows the goal moves several steps per turn and, when it
//! needs the *helper* to carry the token across one of its own walls, inserts
//! an out-and-back detour whose length encodes the requested move. The helper
//! learns one DFA per action with L* ([`lstar`]), extracts detours from the
//! seeker's last turn ([`helper::capping`]) and answers with the action whose
//! automaton accepts the most of them ([`helper::ncc`]).
//!
//! The [`harness`] module generates boards, plays seeded trials under three
//! helper strategies and aggregates success rate, step count and the seeker's
//! wall memory.
//!
//! Every capability has a runnable example:
//!
//! ```text
//! cargo run --release --example play_trial
//! cargo run --release --example plan_with_violations
//! cargo run --release --example learn_intent_dfas
//! cargo run --release --example read_intent
//! cargo run --release --example dfa_jaccard
//! cargo run --release --example training_corpus
//! cargo run --release --example compare_strategies
//! ```

pub mod automata;
pub mod game;
pub mod harness;
pub mod helper;
pub mod lstar;
pub mod seed;
pub mod seeker;

pub use automata::{jaccard, Dfa, Word};
pub use game::{Action, Cell, GameConfig, Player, Trajectory, WallSet};
pub use helper::{IntentResponseDfas, Strategy};
pub use seeker::{Seeker, SignalConvention};
