use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::algorithms::{ae_arm_da, commit_match, uniform_explore, Algorithm, StopReason};
use crate::bandit::{theoretical_samples, Environment};
use crate::error::Result;
use crate::market::{MarketInstance, Matching, MatchingFile, Side};
use crate::profile::generate;
use crate::seed::{derive_seed, rng_from_seed, tag};
use crate::stability::{da_match, is_stable, regret_against, RegretReference};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFlags {
    pub stopped_by: Option<StopReason>,
    pub rounds_used: Option<u64>,
    pub budget_exhausted: bool,
    pub arbitrary_completion: bool,
}

/// Outcome of one algorithm at one budget on one random instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    pub algorithm: Algorithm,
    pub budget: u64,
    pub matching: MatchingFile,
    pub stable: bool,
    pub regret_opt: Vec<f64>,
    pub regret_pess: Vec<f64>,
    pub total_pulls: u64,
    pub counts: Vec<Vec<u64>>,
    pub flags: TrialFlags,
}

impl TrialResult {
    pub fn mean(values: &[f64]) -> f64 {
        values.iter().sum::<f64>() / values.len() as f64
    }

    pub fn max(values: &[f64]) -> f64 {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// The random instance of trial `trial_index`.
pub fn trial_instance(config: &ExperimentConfig, trial_index: u64) -> Result<MarketInstance> {
    let seed = derive_seed(config.base_seed, &[trial_index, tag("instance")]);
    generate(config.profile, config.n, config.k, seed)?.scaled(config.scale)
}

/// Seed of the reward stream for a sampler at a budget index.
pub fn stream_seed(config: &ExperimentConfig, trial_index: u64, sampler: &str, budget_index: usize) -> u64 {
    derive_seed(config.base_seed, &[trial_index, tag(sampler), budget_index as u64])
}

struct Sampling {
    total_pulls: u64,
    counts: Vec<Vec<u64>>,
    flags: TrialFlags,
}

struct Scorer<'a> {
    instance: &'a MarketInstance,
    top: Matching,
    bottom: Matching,
}

impl Scorer<'_> {
    fn score(&self, trial: u64, algorithm: Algorithm, budget: u64, m: &Matching, sampling: Sampling) -> TrialResult {
        TrialResult {
            trial,
            algorithm,
            budget,
            matching: m.to_file(),
            stable: is_stable(self.instance, m),
            regret_opt: regret_against(self.instance, m, &self.top, RegretReference::AgentOptimal).values,
            regret_pess: regret_against(self.instance, m, &self.bottom, RegretReference::AgentPessimal).values,
            total_pulls: sampling.total_pulls,
            counts: sampling.counts,
            flags: sampling.flags,
        }
    }
}

/// Runs every configured algorithm at every budget on trial `trial_index`'s instance.
///
/// Both uniform variants commit from the same exploration run, so their
/// estimates agree within a trial. Results are ordered by algorithm tag, then budget.
pub fn run_trial(config: &ExperimentConfig, trial_index: u64) -> Result<Vec<TrialResult>> {
    let instance = trial_instance(config, trial_index)?;
    let params = config.confidence()?;
    let model = config.reward_model()?;
    let scorer = Scorer {
        instance: &instance,
        top: da_match(&instance, Side::AgentProposing),
        bottom: da_match(&instance, Side::ArmProposing),
    };
    let duel_cap = config
        .duel_gap_hint
        .map(|gap| theoretical_samples(gap, config.k, params).map(|t| 4 * t))
        .transpose()?;
    let wants = |a: Algorithm| config.algorithms.contains(&a);

    let mut out = Vec::new();
    for (bi, &budget) in config.budgets.iter().enumerate() {
        if wants(Algorithm::UniformAgentDa) || wants(Algorithm::UniformArmDa) {
            let sampler = Algorithm::UniformAgentDa.sampler_tag();
            let rng = rng_from_seed(stream_seed(config, trial_index, sampler, bi));
            let mut env = Environment::new(&instance, model, rng);
            let explore = uniform_explore(&mut env, params, config.uniform_rounds(budget), config.schedule)?;
            let flags = TrialFlags {
                stopped_by: Some(explore.stopped_by),
                rounds_used: Some(explore.rounds_used),
                budget_exhausted: explore.stopped_by == StopReason::BudgetExhausted,
                arbitrary_completion: false,
            };
            for (alg, side) in [
                (Algorithm::UniformAgentDa, Side::AgentProposing),
                (Algorithm::UniformArmDa, Side::ArmProposing),
            ] {
                if wants(alg) {
                    let m = commit_match(&explore.stats, &instance, side)?;
                    out.push(scorer.score(
                        trial_index,
                        alg,
                        budget,
                        &m,
                        Sampling {
                            total_pulls: explore.total_pulls,
                            counts: explore.stats.counts(),
                            flags: flags.clone(),
                        },
                    ));
                }
            }
        }
        if wants(Algorithm::AeArmDa) {
            let rng = rng_from_seed(stream_seed(config, trial_index, Algorithm::AeArmDa.sampler_tag(), bi));
            let mut env = Environment::new(&instance, model, rng);
            let ae = ae_arm_da(&mut env, params, budget, duel_cap)?;
            let flags = TrialFlags {
                stopped_by: None,
                rounds_used: None,
                budget_exhausted: ae.budget_exhausted,
                arbitrary_completion: ae.arbitrary_completion,
            };
            out.push(scorer.score(
                trial_index,
                Algorithm::AeArmDa,
                budget,
                &ae.matching,
                Sampling {
                    total_pulls: ae.total_pulls,
                    counts: ae.stats.counts(),
                    flags,
                },
            ));
        }
    }
    out.sort_by(|a, b| a.algorithm.tag().cmp(b.algorithm.tag()).then(a.budget.cmp(&b.budget)));
    Ok(out)
}
