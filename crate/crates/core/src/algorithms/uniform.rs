//! Uniform round-robin exploration followed by a deferred-acceptance commit.

use serde::{Deserialize, Serialize};

use crate::bandit::{ConfidenceParams, Environment, SampleStats};
use crate::error::{MarketError, Result};
use crate::market::{MarketInstance, Matching, Side};
use crate::stability::da_match;

/// Which arm agent `i` pulls in round `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// 1-based arm `((t + i - 2) mod K) + 1`: every round each agent pulls, staggered so
    /// agents start on different arms.
    #[default]
    Staggered,
    /// 1-based arm `(t + i - 1) mod (K + 1)`, where 0 means the agent idles that round.
    Literal,
}

impl Schedule {
    /// 0-based arm for 0-based `round` and `agent`, or `None` for an idle slot.
    pub fn arm(self, round: u64, agent: usize, n_arms: usize) -> Option<usize> {
        match self {
            Self::Staggered => Some(((round + agent as u64) % n_arms as u64) as usize),
            Self::Literal => {
                // with 1-based t = round + 1 and i = agent + 1: (t + i - 1) = round + agent + 1
                let slot = (round + agent as u64 + 1) % (n_arms as u64 + 1);
                slot.checked_sub(1).map(|j| j as usize)
            }
        }
    }

    /// Rounds needed before every pair has at least one sample.
    pub fn rounds_to_cover(self, n_arms: usize) -> u64 {
        match self {
            Self::Staggered => n_arms as u64,
            Self::Literal => n_arms as u64 + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    CiSeparation,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploreOutcome {
    pub stats: SampleStats,
    pub stopped_by: StopReason,
    pub rounds_used: u64,
    pub total_pulls: u64,
}

/// Explores round-robin for at most `max_rounds` rounds, stopping after the
/// first round in which every agent's confidence intervals are totally
/// separated.
pub fn uniform_explore(
    env: &mut Environment<'_>,
    params: ConfidenceParams,
    max_rounds: u64,
    schedule: Schedule,
) -> Result<ExploreOutcome> {
    if max_rounds == 0 {
        return Err(MarketError::InvalidConfig(
            "uniform exploration needs at least one round".into(),
        ));
    }
    let (n, k) = (env.instance.n_agents(), env.instance.n_arms());
    let mut stats = SampleStats::new(n, k);
    let mut stopped_by = StopReason::BudgetExhausted;
    let mut rounds_used = 0;
    for round in 0..max_rounds {
        for agent in 0..n {
            if let Some(arm) = schedule.arm(round, agent, k) {
                env.pull_into(&mut stats, agent, arm)?;
            }
        }
        rounds_used = round + 1;
        if (0..n).all(|i| stats.agent_separated(i, params)) {
            stopped_by = StopReason::CiSeparation;
            break;
        }
    }
    let total_pulls = stats.total_pulls();
    Ok(ExploreOutcome {
        stats,
        stopped_by,
        rounds_used,
        total_pulls,
    })
}

/// Deferred acceptance on the sample means, with the arms' known preferences.
pub fn commit_match(stats: &SampleStats, instance: &MarketInstance, side: Side) -> Result<Matching> {
    let estimated = instance.with_utilities(stats.estimated_utilities()?)?;
    Ok(da_match(&estimated, side))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::{confidence_radius, RewardModel};
    use crate::fixtures;
    use crate::seed::rng_from_seed;
    use crate::stability::is_stable;

    fn two_arm_gap_one() -> MarketInstance {
        MarketInstance::new(vec![vec![1.0, 0.0]], vec![vec![0], vec![0]]).unwrap()
    }

    #[test]
    fn staggered_schedule_covers_arms() {
        let s = Schedule::Staggered;
        assert_eq!(
            (0..3).map(|r| s.arm(r, 0, 3).unwrap()).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        assert_eq!(
            (0..3).map(|r| s.arm(r, 1, 3).unwrap()).collect::<Vec<_>>(),
            vec![1, 2, 0]
        );
    }

    #[test]
    fn literal_schedule_has_idle_slot() {
        let s = Schedule::Literal;
        // agent 1 (1-based) in rounds 1..=4 with K = 3: j = 1, 2, 3, 0
        let got: Vec<_> = (0..4).map(|r| s.arm(r, 0, 3)).collect();
        assert_eq!(got, vec![Some(0), Some(1), Some(2), None]);
    }

    #[test]
    fn noiseless_two_arm_stop_round() {
        // oracle: first t with 1 > 2 r(t) at K = 2; each arm then holds t samples
        let per_arm = (1u64..)
            .find(|&t| 1.0 > 2.0 * confidence_radius(t, 2, ConfidenceParams::default()).unwrap())
            .unwrap();
        assert_eq!(per_arm, 34);
        let inst = two_arm_gap_one();
        let mut env = Environment::new(&inst, RewardModel::noiseless(), rng_from_seed(0));
        let out = uniform_explore(&mut env, ConfidenceParams::default(), 10_000, Schedule::Staggered).unwrap();
        assert_eq!(out.stopped_by, StopReason::CiSeparation);
        assert_eq!(out.stats.count(0, 0), per_arm);
        assert_eq!(out.stats.count(0, 1), per_arm);
        assert_eq!(out.rounds_used, 2 * per_arm);
        assert_eq!(out.total_pulls, 2 * per_arm);
    }

    #[test]
    fn one_round_budget_is_exhausted() {
        let inst = two_arm_gap_one();
        let mut env = Environment::new(&inst, RewardModel::noiseless(), rng_from_seed(0));
        let out = uniform_explore(&mut env, ConfidenceParams::default(), 1, Schedule::Staggered).unwrap();
        assert_eq!(out.stopped_by, StopReason::BudgetExhausted);
        assert_eq!(out.rounds_used, 1);
        let mut env = Environment::new(&inst, RewardModel::noiseless(), rng_from_seed(0));
        assert!(uniform_explore(&mut env, ConfidenceParams::default(), 0, Schedule::Staggered).is_err());
    }

    #[test]
    fn counts_stay_balanced() {
        let inst = crate::profile::gen_general(4, 5, 3).unwrap();
        for rounds in [1u64, 4, 7, 13] {
            let mut env = Environment::new(&inst, RewardModel::default(), rng_from_seed(rounds));
            let out = uniform_explore(
                &mut env,
                ConfidenceParams::new(50.0).unwrap(),
                rounds,
                Schedule::Staggered,
            )
            .unwrap();
            for i in 0..4 {
                let c: Vec<u64> = (0..5).map(|j| out.stats.count(i, j)).collect();
                assert!(c.iter().max().unwrap() - c.iter().min().unwrap() <= 1, "{c:?}");
                assert_eq!(c.iter().sum::<u64>(), rounds);
            }
        }
    }

    #[test]
    fn separation_outcome_orders_every_agent() {
        let inst = crate::profile::gen_general(3, 3, 8).unwrap();
        let mut env = Environment::new(&inst, RewardModel::default(), rng_from_seed(5));
        let params = ConfidenceParams::default();
        let out = uniform_explore(&mut env, params, 1_000_000, Schedule::Staggered).unwrap();
        assert_eq!(out.stopped_by, StopReason::CiSeparation);
        for i in 0..3 {
            let mut arms: Vec<usize> = (0..3).collect();
            arms.sort_by(|&a, &b| out.stats.mean(i, b).unwrap().total_cmp(&out.stats.mean(i, a).unwrap()));
            for w in arms.windows(2) {
                assert!(out.stats.lcb(i, w[0], params).unwrap() > out.stats.ucb(i, w[1], params).unwrap());
            }
        }
    }

    #[test]
    fn commit_on_flipped_estimates() {
        let truth = fixtures::two_by_two_unique();
        let mut stats = SampleStats::new(2, 2);
        for (i, row) in [[1.0, 2.0], [2.0, 1.0]].iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                stats.record(i, j, v);
            }
        }
        let agent = commit_match(&stats, &truth, Side::AgentProposing).unwrap();
        let arm = commit_match(&stats, &truth, Side::ArmProposing).unwrap();
        assert_eq!(agent.pairs(), vec![(0, 1), (1, 0)]);
        assert!(!is_stable(&truth, &agent));
        assert_eq!(arm.pairs(), vec![(0, 0), (1, 1)]);
        assert!(is_stable(&truth, &arm));
    }

    #[test]
    fn commit_on_exact_estimates_gives_agent_optimal() {
        let inst = fixtures::opposing_two_by_two();
        let mut env = Environment::new(&inst, RewardModel::noiseless(), rng_from_seed(0));
        let out = uniform_explore(&mut env, ConfidenceParams::default(), 2, Schedule::Staggered).unwrap();
        let m = commit_match(&out.stats, &inst, Side::AgentProposing).unwrap();
        assert_eq!(m, da_match(&inst, Side::AgentProposing));
    }

    #[test]
    fn commit_needs_every_pair() {
        let inst = fixtures::opposing_two_by_two();
        let stats = SampleStats::new(2, 2);
        assert!(matches!(
            commit_match(&stats, &inst, Side::ArmProposing),
            Err(MarketError::IncompleteEstimate { .. })
        ));
    }
}
