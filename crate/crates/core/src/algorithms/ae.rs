//! Arm-proposing deferred acceptance where agents settle contested proposals by duels.

use serde::{Deserialize, Serialize};

use super::duel::duel;
use crate::bandit::{ConfidenceParams, Environment, SampleStats};
use crate::error::Result;
use crate::market::Matching;

/// One contested proposal: `challenger` proposed to `agent`, who held `incumbent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DuelRecord {
    pub agent: usize,
    pub incumbent: usize,
    pub challenger: usize,
    pub winner: usize,
    pub incumbent_mean: Option<f64>,
    pub challenger_mean: Option<f64>,
    pub pulls: u64,
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AeOutcome {
    pub matching: Matching,
    pub stats: SampleStats,
    pub total_pulls: u64,
    /// The sample budget ran out while some unmatched arm still had proposals left.
    pub budget_exhausted: bool,
    /// Leftover arms were paired greedily after the budget ran out.
    pub arbitrary_completion: bool,
    pub duels: Vec<DuelRecord>,
}

/// Runs AE arm-DA with a total sample budget of `budget` pulls.
///
/// The lowest-index unmatched arm with agents left proposes to its best
/// untried agent. A free agent accepts; a held agent duels its current arm
/// (first) against the proposer (second) and keeps the duel winner. Each duel
/// may use at most the remaining budget, further capped by `duel_cap` when
/// given. The loop runs while pulls used < `budget`. If it stops with
/// proposals pending, each unmatched arm in index order takes its most
/// preferred free agent.
pub fn ae_arm_da(
    env: &mut Environment<'_>,
    params: ConfidenceParams,
    budget: u64,
    duel_cap: Option<u64>,
) -> Result<AeOutcome> {
    let instance = env.instance;
    let (n, k) = (instance.n_agents(), instance.n_arms());
    let mut stats = SampleStats::new(n, k);
    let mut matching = Matching::empty(n, k);
    let mut next = vec![0usize; k];
    let mut duels = Vec::new();
    let pending = |m: &Matching, next: &[usize]| (0..k).find(|&b| m.agent_of(b).is_none() && next[b] < n);

    let mut budget_exhausted = false;
    while let Some(arm) = pending(&matching, &next) {
        let used = stats.total_pulls();
        if used >= budget {
            budget_exhausted = true;
            break;
        }
        let agent = instance.arm_prefs(arm)[next[arm]];
        next[arm] += 1;
        let Some(incumbent) = matching.arm_of(agent) else {
            matching.assign(agent, arm);
            continue;
        };
        let cap = duel_cap.map_or(budget - used, |c| c.min(budget - used));
        let out = duel(env, &mut stats, agent, incumbent, arm, params, cap)?;
        duels.push(DuelRecord {
            agent,
            incumbent,
            challenger: arm,
            winner: out.winner,
            incumbent_mean: stats.mean(agent, incumbent),
            challenger_mean: stats.mean(agent, arm),
            pulls: out.pulls_used,
            capped: out.capped,
        });
        if out.winner == arm {
            matching.assign(agent, arm);
        }
    }

    let mut arbitrary_completion = false;
    if budget_exhausted {
        for arm in 0..k {
            if matching.agent_of(arm).is_some() {
                continue;
            }
            let free = instance
                .arm_prefs(arm)
                .iter()
                .copied()
                .find(|&a| matching.arm_of(a).is_none());
            if let Some(agent) = free {
                matching.assign(agent, arm);
                arbitrary_completion = true;
            }
        }
    }

    Ok(AeOutcome {
        matching,
        total_pulls: stats.total_pulls(),
        stats,
        budget_exhausted,
        arbitrary_completion,
        duels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::{theoretical_samples, RewardModel};
    use crate::fixtures;
    use crate::market::{MarketInstance, Side};
    use crate::profile::gen_general;
    use crate::seed::rng_from_seed;
    use crate::stability::{da_match, envy_set};

    fn run(inst: &MarketInstance, model: RewardModel, budget: u64) -> AeOutcome {
        let mut env = Environment::new(inst, model, rng_from_seed(17));
        ae_arm_da(&mut env, ConfidenceParams::default(), budget, None).unwrap()
    }

    #[test]
    fn three_by_three_trace() {
        let inst = fixtures::three_by_three();
        let out = run(&inst, RewardModel::noiseless(), 1_000_000);
        assert_eq!(out.matching.pairs(), vec![(0, 1), (1, 0), (2, 2)]);
        let contests: Vec<_> = out
            .duels
            .iter()
            .map(|d| (d.agent, d.incumbent, d.challenger, d.winner))
            .collect();
        assert_eq!(contests, vec![(0, 1, 2, 1), (1, 0, 2, 0)]);
        assert!(!out.budget_exhausted && !out.arbitrary_completion);
    }

    #[test]
    fn flipped_example_has_no_duels() {
        let inst = fixtures::two_by_two_unique();
        let out = run(&inst, RewardModel::noiseless(), 1_000_000);
        assert_eq!(out.matching.pairs(), vec![(0, 0), (1, 1)]);
        assert!(out.duels.is_empty());
        assert_eq!(out.total_pulls, 0);
    }

    #[test]
    fn zero_budget_completes_arbitrarily() {
        let inst = fixtures::three_by_three();
        let out = run(&inst, RewardModel::noiseless(), 0);
        assert!(out.budget_exhausted);
        assert!(out.arbitrary_completion);
        assert_eq!(out.total_pulls, 0);
        // b1 -> a2, b2 -> a1, b3 -> a3 (first free agent on each list)
        assert_eq!(out.matching.pairs(), vec![(0, 1), (1, 0), (2, 2)]);
    }

    #[test]
    fn budget_is_never_exceeded() {
        let inst = gen_general(6, 6, 2).unwrap();
        for budget in [1u64, 10, 57, 300] {
            let out = run(&inst, RewardModel::default(), budget);
            assert!(out.total_pulls <= budget);
            assert_eq!(out.matching.size(), 6);
        }
    }

    #[test]
    fn noiseless_run_samples_only_pessimal_envy_set() {
        for seed in 0..30 {
            let inst = gen_general(5, 5, seed).unwrap();
            let out = run(&inst, RewardModel::noiseless(), u64::MAX);
            let pess = da_match(&inst, Side::ArmProposing);
            assert_eq!(out.matching, pess, "seed {seed}");
            let es = envy_set(&inst, &pess);
            assert!(out.stats.sampled_pairs().into_iter().all(|(i, j)| es.contains(i, j)));
            let per_pair = theoretical_samples(1.0, 5, ConfidenceParams::default()).unwrap();
            assert!(out.stats.counts().iter().flatten().all(|&c| c <= per_pair));
        }
    }

    #[test]
    fn accepted_arms_improve_under_estimates() {
        let inst = gen_general(6, 6, 4).unwrap();
        let out = run(&inst, RewardModel::default(), u64::MAX);
        for d in out.duels.iter().filter(|d| d.winner == d.challenger) {
            assert!(d.challenger_mean.unwrap() > d.incumbent_mean.unwrap());
        }
    }

    #[test]
    fn duel_cap_bounds_each_contest() {
        let inst = gen_general(5, 5, 6).unwrap();
        let mut env = Environment::new(&inst, RewardModel::default(), rng_from_seed(1));
        let out = ae_arm_da(&mut env, ConfidenceParams::default(), u64::MAX, Some(7)).unwrap();
        assert!(out.duels.iter().all(|d| d.pulls <= 7));
    }
}
