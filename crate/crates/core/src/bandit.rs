//! Stochastic rewards and confidence-bound bookkeeping shared by the learners.
//!
//! Confidence radii use the natural logarithm with the market-wide arm count:
//! `sqrt(2 β ln(K t) / t)` after `t` samples of a pair.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{MarketError, Result};
use crate::market::MarketInstance;
use crate::seed::MarketRng;

/// Gaussian reward noise with standard deviation `noise_scale` (0 = deterministic).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardModel {
    noise_scale: f64,
}

impl RewardModel {
    pub fn new(noise_scale: f64) -> Result<Self> {
        if !(noise_scale >= 0.0 && noise_scale.is_finite()) {
            return Err(MarketError::InvalidConfig(format!(
                "noise scale must be finite and non-negative, got {noise_scale}"
            )));
        }
        Ok(Self { noise_scale })
    }

    pub fn noiseless() -> Self {
        Self { noise_scale: 0.0 }
    }

    pub fn noise_scale(&self) -> f64 {
        self.noise_scale
    }
}

impl Default for RewardModel {
    fn default() -> Self {
        Self { noise_scale: 1.0 }
    }
}

/// One reward for `agent` pulling `arm`: the true utility plus Gaussian noise.
pub fn pull<R: Rng + ?Sized>(
    instance: &MarketInstance,
    agent: usize,
    arm: usize,
    model: RewardModel,
    rng: &mut R,
) -> Result<f64> {
    if agent >= instance.n_agents() || arm >= instance.n_arms() {
        return Err(MarketError::IndexOutOfRange(format!(
            "pull of (agent {}, arm {}) in a {}×{} market",
            agent + 1,
            arm + 1,
            instance.n_agents(),
            instance.n_arms()
        )));
    }
    let mean = instance.utility(agent, arm);
    if model.noise_scale == 0.0 {
        return Ok(mean);
    }
    let z: f64 = rng.sample(StandardNormal);
    Ok(mean + model.noise_scale * z)
}

/// A market plus its reward model and the random stream feeding it.
#[derive(Debug, Clone)]
pub struct Environment<'a> {
    pub instance: &'a MarketInstance,
    pub model: RewardModel,
    rng: MarketRng,
}

impl<'a> Environment<'a> {
    pub fn new(instance: &'a MarketInstance, model: RewardModel, rng: MarketRng) -> Self {
        Self { instance, model, rng }
    }

    /// Draws a reward and records it in `stats`.
    pub fn pull_into(&mut self, stats: &mut SampleStats, agent: usize, arm: usize) -> Result<f64> {
        let reward = pull(self.instance, agent, arm, self.model, &mut self.rng)?;
        stats.record(agent, arm, reward);
        Ok(reward)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceParams {
    beta: f64,
}

impl ConfidenceParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta >= 1.0 && beta.is_finite()) {
            return Err(MarketError::InvalidConfig(format!("beta must be >= 1, got {beta}")));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// β giving failure probability `alpha` for uniform sampling: `1 + ln(4N/α) / ln K`.
    pub fn for_failure_probability(n_agents: usize, n_arms: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(MarketError::InvalidConfig(format!(
                "alpha must be in (0, 1), got {alpha}"
            )));
        }
        if n_arms < 2 {
            return Err(MarketError::InvalidConfig(
                "deriving beta needs at least two arms".into(),
            ));
        }
        Self::new(1.0 + (4.0 * n_agents as f64 / alpha).ln() / (n_arms as f64).ln())
    }
}

impl Default for ConfidenceParams {
    fn default() -> Self {
        Self { beta: 1.0 }
    }
}

/// `sqrt(2 β ln(K t) / t)`.
pub fn confidence_radius(t: u64, n_arms: usize, params: ConfidenceParams) -> Result<f64> {
    if t == 0 {
        return Err(MarketError::NoSamples);
    }
    let t = t as f64;
    Ok((2.0 * params.beta * (n_arms as f64 * t).ln() / t).sqrt())
}

/// Smallest per-pair sample count whose confidence radius is at most `delta / 4`.
pub fn theoretical_samples(delta: f64, n_arms: usize, params: ConfidenceParams) -> Result<u64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(MarketError::InvalidConfig(format!("gap must be positive, got {delta}")));
    }
    let target = delta / 4.0;
    // ln(Kt)/t falls below any positive target eventually; doubling brackets the crossing.
    let fits = |t: u64| confidence_radius(t, n_arms, params).map(|r| r <= target);
    if fits(1)? {
        return Ok(1);
    }
    let mut hi = 2u64;
    while !fits(hi)? {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // radius is decreasing for K t >= 3, so the crossing is unique in (lo, hi]
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Per-pair pull counts and running means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    n_agents: usize,
    n_arms: usize,
    counts: Vec<u64>,
    means: Vec<f64>,
}

impl SampleStats {
    pub fn new(n_agents: usize, n_arms: usize) -> Self {
        Self {
            n_agents,
            n_arms,
            counts: vec![0; n_agents * n_arms],
            means: vec![0.0; n_agents * n_arms],
        }
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    fn idx(&self, agent: usize, arm: usize) -> usize {
        agent * self.n_arms + arm
    }

    pub fn record(&mut self, agent: usize, arm: usize, reward: f64) {
        let i = self.idx(agent, arm);
        self.counts[i] += 1;
        self.means[i] += (reward - self.means[i]) / self.counts[i] as f64;
    }

    pub fn count(&self, agent: usize, arm: usize) -> u64 {
        self.counts[self.idx(agent, arm)]
    }

    pub fn mean(&self, agent: usize, arm: usize) -> Option<f64> {
        let i = self.idx(agent, arm);
        (self.counts[i] > 0).then_some(self.means[i])
    }

    pub fn radius(&self, agent: usize, arm: usize, params: ConfidenceParams) -> Option<f64> {
        confidence_radius(self.count(agent, arm), self.n_arms, params).ok()
    }

    pub fn ucb(&self, agent: usize, arm: usize, params: ConfidenceParams) -> Option<f64> {
        Some(self.mean(agent, arm)? + self.radius(agent, arm, params)?)
    }

    pub fn lcb(&self, agent: usize, arm: usize, params: ConfidenceParams) -> Option<f64> {
        Some(self.mean(agent, arm)? - self.radius(agent, arm, params)?)
    }

    pub fn total_pulls(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Row-major N×K counts.
    pub fn counts(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.n_arms).map(<[u64]>::to_vec).collect()
    }

    pub fn sampled_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n_agents)
            .flat_map(|i| (0..self.n_arms).map(move |j| (i, j)))
            .filter(|&(i, j)| self.count(i, j) > 0)
            .collect()
    }

    /// The N×K matrix of sample means; fails if any pair is unsampled.
    pub fn estimated_utilities(&self) -> Result<Vec<Vec<f64>>> {
        (0..self.n_agents)
            .map(|i| {
                (0..self.n_arms)
                    .map(|j| {
                        self.mean(i, j)
                            .ok_or(MarketError::IncompleteEstimate { agent: i, arm: j })
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether every arm's interval lies strictly above the next one's when sorted by mean.
    pub fn agent_separated(&self, agent: usize, params: ConfidenceParams) -> bool {
        let mut bounds = Vec::with_capacity(self.n_arms);
        for arm in 0..self.n_arms {
            match (self.mean(agent, arm), self.radius(agent, arm, params)) {
                (Some(m), Some(r)) => bounds.push((m, m - r, m + r)),
                _ => return false,
            }
        }
        bounds.sort_by(|a, b| b.0.total_cmp(&a.0));
        bounds.windows(2).all(|w| w[0].1 > w[1].2)
    }
}
