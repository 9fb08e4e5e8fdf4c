mod common;

use common::union_connected;
use tacit::harness::{
    collect_training_corpus, compare_dfas, gen_maze, generate_suite, load_suite, run_experiment, run_trial_logged,
    save_suite, ExperimentConfig, MazeParams, TrialOptions, DEFAULT_DENSITY,
};
use tacit::{Action, IntentResponseDfas, SignalConvention, Strategy};

#[test]
fn generated_boards_are_union_connected() {
    for seed in 0..1000 {
        let cfg = gen_maze(MazeParams::new(9), seed).unwrap();
        assert!(
            union_connected(9, cfg.seeker_walls(), cfg.helper_walls(), cfg.init(), cfg.goal()),
            "seed {seed}"
        );
        assert_ne!(cfg.init(), cfg.goal());
        // 25% of the 144 interior edges
        assert_eq!(cfg.seeker_walls().len(), 36);
        assert_eq!(cfg.helper_walls().len(), 36);
    }
}

#[test]
fn generation_is_deterministic_and_fails_cleanly() {
    let p = MazeParams::new(9).with_density(0.6);
    assert_eq!(gen_maze(p, 5).unwrap().to_maze_text(), gen_maze(p, 5).unwrap().to_maze_text());
    assert!(gen_maze(MazeParams::new(9).with_density(1.0), 0).is_err());
    let tiny = gen_maze(MazeParams::new(2).with_density(0.0), 3).unwrap();
    assert!(tiny.seeker_walls().is_empty() && tiny.helper_walls().is_empty());
}

#[test]
fn suites_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let suite = generate_suite(MazeParams::new(6), 3, 2, 1).unwrap();
    save_suite(&suite, dir.path()).unwrap();
    assert_eq!(load_suite(dir.path()).unwrap(), suite);
}

#[test]
fn direct_communication_nearly_always_succeeds_without_wall_errors() {
    for (density, size) in [(DEFAULT_DENSITY, 9), (0.7, 9)] {
        let suite = generate_suite(MazeParams::new(size).with_density(density), 10, 5, 31).unwrap();
        let mut exp = ExperimentConfig::new(suite, Strategy::DCC, 8);
        exp.trials = 20;
        let out = run_experiment(&exp, None).unwrap();
        let successes = out.rows.iter().filter(|r| r.success).count();
        assert!(successes * 100 >= 99 * out.rows.len(), "density {density}: {successes}/{}", out.rows.len());
        assert!(out.rows.iter().all(|r| r.wall_error_rate == 0.0));
    }
}

#[test]
fn steps_match_the_log() {
    let dfas = IntentResponseDfas::oracles(&SignalConvention::default());
    let suite = generate_suite(MazeParams::new(7).with_density(0.6), 4, 2, 3).unwrap();
    for lc in &suite {
        for strategy in Strategy::ALL {
            for seed in 0..10 {
                let (r, log) =
                    run_trial_logged(&lc.config, strategy, Some(&dfas), 200, seed, &TrialOptions::default());
                assert_eq!(r.steps, log.cells.len());
                assert!(r.steps <= 200);
                if r.success {
                    let last = log.cells.last().unwrap();
                    assert_eq!((last.0, last.1), (lc.config.goal().row, lc.config.goal().col));
                }
            }
        }
    }
}

#[test]
fn summary_aggregates_configuration_means() {
    let dfas = IntentResponseDfas::oracles(&SignalConvention::default());
    let suite = generate_suite(MazeParams::new(7).with_density(0.65), 3, 2, 4).unwrap();
    let mut exp = ExperimentConfig::new(suite, Strategy::NC, 5);
    exp.trials = 15;
    exp.cap = 60;
    let out = run_experiment(&exp, Some(&dfas)).unwrap();
    assert_eq!(out.rows.len(), 6 * 15);
    let mut rates = Vec::new();
    for (i, c) in out.per_configuration.iter().enumerate() {
        let rows = &out.rows[i * 15..(i + 1) * 15];
        assert!(rows.iter().all(|r| (r.layout_id, r.treasure_id) == (c.layout_id, c.treasure_id)));
        let successes = rows.iter().filter(|r| r.success).count();
        assert_eq!(c.success_rate, successes as f64 / 15.0);
        assert!((0.0..=1.0).contains(&c.success_rate));
        rates.push(100.0 * c.success_rate);
    }
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    assert!((out.summary.success_rate.mean - mean).abs() < 1e-9);
    let (lo, hi) = rates.iter().fold((f64::MAX, f64::MIN), |(l, h), &r| (l.min(r), h.max(r)));
    assert!(lo <= out.summary.success_rate.mean && out.summary.success_rate.mean <= hi);
}

#[test]
fn csv_is_identical_across_runs_and_pools() {
    let dfas = IntentResponseDfas::oracles(&SignalConvention::default());
    let suite = generate_suite(MazeParams::new(9).with_density(0.6), 1, 1, 12).unwrap();
    let mut exp = ExperimentConfig::new(suite, Strategy::NCC, 77);
    exp.trials = 3;
    let first = run_experiment(&exp, Some(&dfas)).unwrap().to_csv_string();
    assert_eq!(first.lines().filter(|l| !l.starts_with('#')).count(), 1 + 3);
    for workers in [1, 2, 4] {
        exp.workers = workers;
        assert_eq!(run_experiment(&exp, Some(&dfas)).unwrap().to_csv_string(), first);
    }
    assert!(first.starts_with("layout_id,treasure_id,trial,strategy,seed,success,steps,wall_count,wall_error_rate\n"));
}

#[test]
fn ncc_without_automata_is_an_error() {
    let suite = generate_suite(MazeParams::new(5), 1, 1, 0).unwrap();
    assert!(run_experiment(&ExperimentConfig::new(suite, Strategy::NCC, 0), None).is_err());
}

#[test]
fn corpus_labels_agree_with_the_oracles() {
    let conv = SignalConvention::default();
    let oracles = IntentResponseDfas::oracles(&conv);
    let layouts: Vec<_> = (0..10)
        .map(|s| gen_maze(MazeParams::new(9).with_density(0.6), s).unwrap())
        .collect();
    let corpus = collect_training_corpus(&layouts, 10, 300, 3, &TrialOptions::default());
    assert_eq!(corpus.trajectories, 100);
    let positives = corpus.positives().count();
    assert!(positives > 0);
    assert_eq!(corpus.records.len(), 4 * positives);
    for p in corpus.positives() {
        assert!(oracles.get(p.dfa).accepts(&p.segment).unwrap());
    }
    assert_eq!(corpus.agreement(&oracles), 1.0);
    let again = collect_training_corpus(&layouts, 10, 300, 3, &TrialOptions::default());
    assert_eq!(again.to_json_lines(), corpus.to_json_lines());

    // one trajectory's three signals give three positives and nine negatives
    let (layout, trajectory) = corpus
        .records
        .iter()
        .map(|r| (r.layout, r.trajectory))
        .find(|&(l, t)| corpus.positives().filter(|p| (p.layout, p.trajectory) == (l, t)).count() == 3)
        .expect("some trajectory signals exactly three times");
    let mine: Vec<_> = corpus
        .records
        .iter()
        .filter(|r| (r.layout, r.trajectory) == (layout, trajectory))
        .collect();
    assert_eq!(mine.iter().filter(|r| r.label).count(), 3);
    assert_eq!(mine.iter().filter(|r| !r.label).count(), 9);
}

#[test]
fn perturbed_oracle_is_detected() {
    let conv = SignalConvention::default();
    let oracles = IntentResponseDfas::oracles(&conv);
    let up = oracles.get(Action::Up);
    let accepting = up.accepting_states()[0];
    let mut map: std::collections::BTreeMap<_, _> = oracles.iter().map(|(a, d)| (a, d.clone())).collect();
    map.insert(Action::Up, up.with_flipped_state(accepting));
    let perturbed = IntentResponseDfas::from_map(map).unwrap();
    let rows = compare_dfas(&perturbed, &oracles, 8).unwrap();
    let row = &rows[Action::Up.index()];
    assert!(row.jaccard < 1.0);
    assert!(!row.equivalent);
    let cex = row.counterexample.as_ref().unwrap();
    assert_ne!(perturbed.get(Action::Up).accepts(cex).unwrap(), up.accepts(cex).unwrap());
    assert!(rows.iter().filter(|r| r.action != Action::Up).all(|r| r.equivalent && r.jaccard == 1.0));
}

#[test]
fn automata_directories_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let oracles = IntentResponseDfas::oracles(&SignalConvention::default());
    oracles.save_dir(dir.path()).unwrap();
    let back = IntentResponseDfas::load_dir(dir.path()).unwrap();
    for a in Action::ALL {
        assert_eq!(back.get(a).equivalent(oracles.get(a)).unwrap(), None);
    }
}
