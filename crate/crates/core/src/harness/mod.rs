//! Maze generation, trial and experiment execution, metrics, training-corpus
//! collection and automaton comparison.

mod corpus;
mod experiment;
mod maze_gen;
mod training;
mod trial;

use std::path::Path;

use thiserror::Error;

pub use corpus::{collect_training_corpus, Corpus, CorpusRecord};
pub use experiment::{
    default_cap, generate_suite, load_suite, run_experiment, save_suite, suite_file_name,
    ConfigurationStats, ExperimentConfig, ExperimentOutput, LabeledConfig, MeanStd, MetricsSummary,
    TrialRow,
};
pub use maze_gen::{gen_layout, gen_maze, MazeParams, DEFAULT_DENSITY, MAX_REJECTIONS};
pub use training::{compare_dfas, learn_intent_dfas, ComparisonRow, LearnReport, DEFAULT_JACCARD_LEN};
pub use trial::{run_trial, run_trial_logged, wall_memory_metrics, TrialLog, TrialOptions, TrialResult, TurnRecord};

use crate::game::MazeFormatError;
use crate::helper::HelperError;
use crate::lstar::LearnError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("could not generate a cooperatively solvable {size}x{size} maze after {attempts} attempts")]
    GenerationFailed { size: usize, attempts: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Maze {
        path: String,
        #[source]
        source: MazeFormatError,
    },
    #[error("NCC needs intent-response automata")]
    MissingDfas,
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Helper(#[from] HelperError),
    #[error(transparent)]
    Learn(#[from] LearnError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
