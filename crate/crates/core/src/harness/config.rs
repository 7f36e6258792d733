use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stats::CiMethod;
use crate::algorithms::{Algorithm, Schedule};
use crate::bandit::{ConfidenceParams, RewardModel};
use crate::error::{MarketError, Result};
use crate::profile::ProfileKind;

/// One Monte Carlo experiment. Budgets are total market pulls; uniform
/// variants translate a budget `B` into `B / n` exploration rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub profile: ProfileKind,
    #[serde(default = "default_scale")]
    pub scale: f64,
    pub algorithms: Vec<Algorithm>,
    pub budgets: Vec<u64>,
    pub trials: usize,
    /// Confidence width parameter; derived from `alpha_budget` when absent.
    #[serde(default)]
    pub beta: Option<f64>,
    pub noise_scale: f64,
    pub base_seed: u64,
    pub alpha_budget: f64,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default)]
    pub ci_method: CiMethod,
    /// When set, each duel is capped at 4× the theoretical per-pair count for this gap.
    #[serde(default)]
    pub duel_gap_hint: Option<f64>,
}

fn default_scale() -> f64 {
    1.0
}

impl ExperimentConfig {
    /// General-profile sweep over every algorithm: N = K = 20, 200 trials, unit noise, β = 1.
    pub fn reference_sweep() -> Self {
        Self {
            n: 20,
            k: 20,
            profile: ProfileKind::General,
            scale: 1.0,
            algorithms: Algorithm::ALL.to_vec(),
            budgets: default_budget_grid(20, 20),
            trials: 200,
            beta: Some(1.0),
            noise_scale: 1.0,
            base_seed: 2024,
            alpha_budget: 0.05,
            schedule: Schedule::Staggered,
            ci_method: CiMethod::Normal,
            duel_gap_hint: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(MarketError::InvalidConfig(msg));
        if self.n == 0 || self.k == 0 {
            return bad(format!(
                "market sizes must be positive (n = {}, k = {})",
                self.n, self.k
            ));
        }
        if self.profile == ProfileKind::Spc && self.n != self.k {
            return bad("SPC profiles need n == k".into());
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return bad(format!("scale must be positive, got {}", self.scale));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms selected".into());
        }
        let mut algs = self.algorithms.clone();
        algs.sort();
        algs.dedup();
        if algs.len() != self.algorithms.len() {
            return bad("algorithm list has duplicates".into());
        }
        if self.budgets.is_empty() || self.budgets.windows(2).any(|w| w[0] >= w[1]) {
            return bad("budgets must be non-empty and strictly increasing".into());
        }
        if !(self.alpha_budget > 0.0 && self.alpha_budget < 1.0) {
            return bad(format!("alpha_budget must be in (0, 1), got {}", self.alpha_budget));
        }
        if let Some(h) = self.duel_gap_hint {
            if !(h > 0.0 && h.is_finite()) {
                return bad(format!("duel_gap_hint must be positive, got {h}"));
            }
        }
        RewardModel::new(self.noise_scale)?;
        self.confidence()?;
        if self.algorithms.iter().any(|a| a.is_uniform()) {
            let min_budget = self.n as u64 * self.schedule.rounds_to_cover(self.k);
            if self.budgets[0] < min_budget {
                return bad(format!(
                    "uniform sampling needs a budget of at least {min_budget} pulls to sample every pair once, got {}",
                    self.budgets[0]
                ));
            }
        }
        Ok(())
    }

    pub fn confidence(&self) -> Result<ConfidenceParams> {
        match self.beta {
            Some(b) => ConfidenceParams::new(b),
            None => ConfidenceParams::for_failure_probability(self.n, self.k, self.alpha_budget),
        }
    }

    pub fn reward_model(&self) -> Result<RewardModel> {
        RewardModel::new(self.noise_scale)
    }

    pub fn uniform_rounds(&self, budget: u64) -> u64 {
        budget / self.n as u64
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Geometric grid with ratio √2 from `n·k` up to `n·k·160`, rounded down to multiples of `n`.
pub fn default_budget_grid(n: usize, k: usize) -> Vec<u64> {
    let base = (n * k) as f64;
    let step = n as u64;
    let mut grid: Vec<u64> = (0..16)
        .map(|e| {
            let raw = (base * 2f64.powf(e as f64 / 2.0)) as u64;
            (raw / step) * step
        })
        .take_while(|&b| b as f64 <= base * 160.0)
        .collect();
    grid.dedup();
    grid
}
