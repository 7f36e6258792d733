//! Monte Carlo experiment runner: trials, aggregation with 95% intervals, CSV persistence.
//!
//! Trials are independent and seeded from `(base_seed, trial_index, ...)`.
//! With the `parallel` feature they fan out over a rayon pool; aggregation
//! always walks trials in index order, so output does not depend on the
//! thread count.

mod config;
mod export;
mod stats;
mod trial;

pub use config::{default_budget_grid, ExperimentConfig};
pub use export::{read_results, write_results, CSV_HEADER};
pub use stats::{ci95, wilson95, CiMethod, ConfidenceInterval};
pub use trial::{run_trial, stream_seed, trial_instance, TrialFlags, TrialResult};

use serde::{Deserialize, Serialize};

use crate::algorithms::Algorithm;
use crate::error::Result;

/// Number of worker threads for the trial fan-out; `0` means one per core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parallelism(pub usize);

impl Parallelism {
    pub const SEQUENTIAL: Parallelism = Parallelism(1);
    pub const ALL_CORES: Parallelism = Parallelism(0);
}

/// Runs all trials; the result is indexed by trial.
pub fn run_trials(config: &ExperimentConfig, parallelism: Parallelism) -> Result<Vec<Vec<TrialResult>>> {
    config.validate()?;
    let indices: Vec<u64> = (0..config.trials as u64).collect();
    if parallelism == Parallelism::SEQUENTIAL {
        return indices.iter().map(|&t| run_trial(config, t)).collect();
    }
    fan_out(config, &indices, parallelism)
}

#[cfg(feature = "parallel")]
fn fan_out(config: &ExperimentConfig, indices: &[u64], parallelism: Parallelism) -> Result<Vec<Vec<TrialResult>>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.0)
        .build()
        .expect("rayon pool");
    pool.install(|| indices.par_iter().map(|&t| run_trial(config, t)).collect())
}

#[cfg(not(feature = "parallel"))]
fn fan_out(config: &ExperimentConfig, indices: &[u64], _parallelism: Parallelism) -> Result<Vec<Vec<TrialResult>>> {
    indices.iter().map(|&t| run_trial(config, t)).collect()
}

/// Summary of one `(algorithm, budget)` cell over all trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub algorithm: String,
    pub budget: u64,
    pub trials: usize,
    pub stability: ConfidenceInterval,
    pub avg_regret_opt: ConfidenceInterval,
    pub max_regret_opt: ConfidenceInterval,
    pub avg_regret_pess: ConfidenceInterval,
    pub max_regret_pess: ConfidenceInterval,
    pub mean_total_pulls: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AggregateResult {
    /// Sorted by algorithm tag, then budget.
    pub rows: Vec<AggregateRow>,
}

impl AggregateResult {
    pub fn row(&self, algorithm: Algorithm, budget: u64) -> Option<&AggregateRow> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm.tag() && r.budget == budget)
    }

    /// Rows of one algorithm in budget order.
    pub fn curve(&self, algorithm: Algorithm) -> Vec<&AggregateRow> {
        self.rows.iter().filter(|r| r.algorithm == algorithm.tag()).collect()
    }
}

/// Reduces per-trial results into per-cell rates and regrets.
pub fn aggregate(trials: &[Vec<TrialResult>], ci_method: CiMethod) -> AggregateResult {
    let mut flat: Vec<&TrialResult> = trials.iter().flatten().collect();
    flat.sort_by(|a, b| (a.algorithm.tag(), a.budget, a.trial).cmp(&(b.algorithm.tag(), b.budget, b.trial)));
    let mut rows = Vec::new();
    for cell in flat.chunk_by(|a, b| a.algorithm == b.algorithm && a.budget == b.budget) {
        let column = |f: &dyn Fn(&TrialResult) -> f64| cell.iter().map(|r| f(r)).collect::<Vec<f64>>();
        let stable = column(&|r| if r.stable { 1.0 } else { 0.0 });
        let stability = match ci_method {
            CiMethod::Normal => ci95(&stable),
            CiMethod::Wilson => wilson95(cell.iter().filter(|r| r.stable).count(), cell.len()),
        };
        rows.push(AggregateRow {
            algorithm: cell[0].algorithm.tag().to_string(),
            budget: cell[0].budget,
            trials: cell.len(),
            stability,
            avg_regret_opt: ci95(&column(&|r| TrialResult::mean(&r.regret_opt))),
            max_regret_opt: ci95(&column(&|r| TrialResult::max(&r.regret_opt))),
            avg_regret_pess: ci95(&column(&|r| TrialResult::mean(&r.regret_pess))),
            max_regret_pess: ci95(&column(&|r| TrialResult::max(&r.regret_pess))),
            mean_total_pulls: column(&|r| r.total_pulls as f64).iter().sum::<f64>() / cell.len() as f64,
        });
    }
    AggregateResult { rows }
}

/// Runs the experiment and aggregates it.
pub fn run_experiment(config: &ExperimentConfig, parallelism: Parallelism) -> Result<AggregateResult> {
    let trials = run_trials(config, parallelism)?;
    Ok(aggregate(&trials, config.ci_method))
}
