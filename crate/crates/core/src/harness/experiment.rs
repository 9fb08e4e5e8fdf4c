use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::maze_gen::{gen_layout, MazeParams};
use super::trial::{run_trial, TrialOptions, TrialResult};
use super::HarnessError;
use crate::game::GameConfig;
use crate::helper::{IntentResponseDfas, Strategy};
use crate::seed::derive;

/// Step cap used when none is given: 300 up to 9×9, 600 above.
pub fn default_cap(size: usize) -> usize {
    if size <= 9 {
        300
    } else {
        600
    }
}

/// A game configuration tagged with its layout and treasure indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledConfig {
    pub layout_id: usize,
    pub treasure_id: usize,
    pub config: GameConfig,
}

/// `layouts` generated boards with `treasures` goals each.
pub fn generate_suite(
    params: MazeParams,
    layouts: usize,
    treasures: usize,
    seed: u64,
) -> Result<Vec<LabeledConfig>, HarnessError> {
    let mut suite = Vec::with_capacity(layouts * treasures);
    for layout_id in 0..layouts {
        let configs = gen_layout(params, treasures, derive(seed, &[layout_id as u64]))?;
        suite.extend(
            configs
                .into_iter()
                .enumerate()
                .map(|(treasure_id, config)| LabeledConfig {
                    layout_id,
                    treasure_id,
                    config,
                }),
        );
    }
    Ok(suite)
}

/// File name used for a suite member, `l003_t1.json`.
pub fn suite_file_name(layout_id: usize, treasure_id: usize) -> String {
    format!("l{layout_id:03}_t{treasure_id}.json")
}

fn parse_suite_name(stem: &str) -> Option<(usize, usize)> {
    let rest = stem.strip_prefix('l')?;
    let (l, t) = rest.split_once("_t")?;
    Some((l.parse().ok()?, t.parse().ok()?))
}

pub fn save_suite(suite: &[LabeledConfig], dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    for lc in suite {
        let path = dir.join(suite_file_name(lc.layout_id, lc.treasure_id));
        fs::write(&path, lc.config.to_maze_text()).map_err(|e| HarnessError::io(&path, e))?;
    }
    Ok(())
}

/// Reads every `*.json` maze in `dir`, sorted by name. Files named like
/// [`suite_file_name`] keep their labels; others become their own layout.
pub fn load_suite(dir: &Path) -> Result<Vec<LabeledConfig>, HarnessError> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| HarnessError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut suite = Vec::with_capacity(paths.len());
    for (i, path) in paths.iter().enumerate() {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let config = GameConfig::from_maze_text(&text).map_err(|source| HarnessError::Maze {
            path: path.display().to_string(),
            source,
        })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        let (layout_id, treasure_id) = parse_suite_name(stem).unwrap_or((i, 0));
        suite.push(LabeledConfig {
            layout_id,
            treasure_id,
            config,
        });
    }
    Ok(suite)
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub suite: Vec<LabeledConfig>,
    pub trials: usize,
    pub cap: usize,
    pub strategy: Strategy,
    pub master_seed: u64,
    /// Worker threads; 0 uses rayon's default.
    pub workers: usize,
    pub options: TrialOptions,
}

impl ExperimentConfig {
    pub fn new(suite: Vec<LabeledConfig>, strategy: Strategy, master_seed: u64) -> Self {
        let size = suite.first().map_or(9, |c| c.config.size());
        ExperimentConfig {
            suite,
            trials: 100,
            cap: default_cap(size),
            strategy,
            master_seed,
            workers: 0,
            options: TrialOptions::default(),
        }
    }

    pub fn trial_seed(&self, layout_id: usize, treasure_id: usize, trial: usize) -> u64 {
        derive(self.master_seed, &[layout_id as u64, treasure_id as u64, trial as u64])
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRow {
    pub layout_id: usize,
    pub treasure_id: usize,
    pub trial: usize,
    pub strategy: Strategy,
    pub seed: u64,
    pub success: bool,
    pub steps: usize,
    pub wall_count: usize,
    pub wall_error_rate: f64,
}

/// Within-configuration means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigurationStats {
    pub layout_id: usize,
    pub treasure_id: usize,
    pub success_rate: f64,
    pub mean_steps: f64,
    pub mean_wall_count: f64,
    pub mean_wall_error_rate: f64,
}

/// Mean and sample standard deviation over configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> MeanStd {
        let n = values.len();
        if n == 0 {
            return MeanStd { mean: 0.0, std: 0.0 };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        MeanStd { mean, std }
    }

    /// Standard error of the mean over `n` samples.
    pub fn std_error(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.std / (n as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsSummary {
    pub strategy: Strategy,
    pub configurations: usize,
    pub trials_per_configuration: usize,
    /// Percent.
    pub success_rate: MeanStd,
    pub steps: MeanStd,
    pub wall_count: MeanStd,
    /// Percent.
    pub wall_error_rate: MeanStd,
}

impl MetricsSummary {
    fn from_configs(strategy: Strategy, trials: usize, stats: &[ConfigurationStats]) -> Self {
        let col = |f: fn(&ConfigurationStats) -> f64| stats.iter().map(f).collect::<Vec<_>>();
        MetricsSummary {
            strategy,
            configurations: stats.len(),
            trials_per_configuration: trials,
            success_rate: MeanStd::of(&col(|c| 100.0 * c.success_rate)),
            steps: MeanStd::of(&col(|c| c.mean_steps)),
            wall_count: MeanStd::of(&col(|c| c.mean_wall_count)),
            wall_error_rate: MeanStd::of(&col(|c| 100.0 * c.mean_wall_error_rate)),
        }
    }

    pub fn footer_lines(&self) -> Vec<String> {
        let f = |name: &str, m: &MeanStd| format!("# {name}: mean={:.4} std={:.4}", m.mean, m.std);
        vec![
            format!(
                "# summary strategy={} configurations={} trials_per_configuration={}",
                self.strategy, self.configurations, self.trials_per_configuration
            ),
            f("success_rate_percent", &self.success_rate),
            f("steps", &self.steps),
            f("wall_count", &self.wall_count),
            f("wall_error_rate_percent", &self.wall_error_rate),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<TrialRow>,
    pub per_configuration: Vec<ConfigurationStats>,
    pub summary: MetricsSummary,
}

impl ExperimentOutput {
    /// CSV body plus commented summary footer.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        let mut inner = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        for line in self.summary.footer_lines() {
            writeln!(inner, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Runs `trials` seeded trials for every configuration of the suite on a
/// worker pool; rows come back ordered by suite position then trial index.
pub fn run_experiment(
    exp: &ExperimentConfig,
    dfas: Option<&IntentResponseDfas>,
) -> Result<ExperimentOutput, HarnessError> {
    if exp.strategy == Strategy::NCC && dfas.is_none() {
        return Err(HarnessError::MissingDfas);
    }
    let jobs: Vec<(usize, usize)> = (0..exp.suite.len())
        .flat_map(|c| (0..exp.trials).map(move |t| (c, t)))
        .collect();
    let work = || -> Vec<TrialResult> {
        jobs.par_iter()
            .map(|&(c, t)| {
                let lc = &exp.suite[c];
                let seed = exp.trial_seed(lc.layout_id, lc.treasure_id, t);
                run_trial(&lc.config, exp.strategy, dfas, exp.cap, seed, &exp.options)
            })
            .collect()
    };
    let results = if exp.workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(exp.workers)
            .build()
            .map_err(|e| HarnessError::Pool(e.to_string()))?
            .install(work)
    };

    let rows: Vec<TrialRow> = jobs
        .iter()
        .zip(&results)
        .map(|(&(c, t), r)| {
            let lc = &exp.suite[c];
            TrialRow {
                layout_id: lc.layout_id,
                treasure_id: lc.treasure_id,
                trial: t,
                strategy: exp.strategy,
                seed: r.seed,
                success: r.success,
                steps: r.steps,
                wall_count: r.memorized_wall_count,
                wall_error_rate: r.wall_error_rate,
            }
        })
        .collect();

    let per_configuration: Vec<ConfigurationStats> = exp
        .suite
        .iter()
        .enumerate()
        .map(|(c, lc)| {
            let rs = &results[c * exp.trials..(c + 1) * exp.trials];
            let n = rs.len().max(1) as f64;
            ConfigurationStats {
                layout_id: lc.layout_id,
                treasure_id: lc.treasure_id,
                success_rate: rs.iter().filter(|r| r.success).count() as f64 / n,
                mean_steps: rs.iter().map(|r| r.steps as f64).sum::<f64>() / n,
                mean_wall_count: rs.iter().map(|r| r.memorized_wall_count as f64).sum::<f64>() / n,
                mean_wall_error_rate: rs.iter().map(|r| r.wall_error_rate).sum::<f64>() / n,
            }
        })
        .collect();
    let summary = MetricsSummary::from_configs(exp.strategy, exp.trials, &per_configuration);
    Ok(ExperimentOutput {
        rows,
        per_configuration,
        summary,
    })
}
