//! Pairwise arm elimination for one agent.

use serde::{Deserialize, Serialize};

use crate::bandit::{ConfidenceParams, Environment, SampleStats};
use crate::error::{MarketError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuelOutcome {
    pub winner: usize,
    pub pulls_used: u64,
    /// The cap stopped sampling before the intervals separated.
    pub capped: bool,
}

fn overlapping(stats: &SampleStats, agent: usize, a: usize, b: usize, params: ConfidenceParams) -> bool {
    match (
        stats.lcb(agent, a, params),
        stats.ucb(agent, a, params),
        stats.lcb(agent, b, params),
        stats.ucb(agent, b, params),
    ) {
        (Some(la), Some(ua), Some(lb), Some(ub)) => la.max(lb) < ua.min(ub),
        // an unsampled arm has an unbounded interval
        _ => true,
    }
}

/// Samples whichever of `arm1`, `arm2` has fewer pulls (ties go to `arm1`)
/// until their confidence intervals stop overlapping or `pull_cap` new pulls
/// are spent. The winner has the larger sample mean; equal or missing means
/// favour `arm1`.
pub fn duel(
    env: &mut Environment<'_>,
    stats: &mut SampleStats,
    agent: usize,
    arm1: usize,
    arm2: usize,
    params: ConfidenceParams,
    pull_cap: u64,
) -> Result<DuelOutcome> {
    if arm1 == arm2 {
        return Err(MarketError::InvalidConfig(format!(
            "duel between arm {} and itself",
            arm1 + 1
        )));
    }
    let mut pulls_used = 0;
    let mut capped = false;
    while overlapping(stats, agent, arm1, arm2, params) {
        if pulls_used >= pull_cap {
            capped = true;
            break;
        }
        let next = if stats.count(agent, arm2) < stats.count(agent, arm1) {
            arm2
        } else {
            arm1
        };
        env.pull_into(stats, agent, next)?;
        pulls_used += 1;
    }
    let m1 = stats.mean(agent, arm1).unwrap_or(f64::NEG_INFINITY);
    let m2 = stats.mean(agent, arm2).unwrap_or(f64::NEG_INFINITY);
    let winner = if m2 > m1 { arm2 } else { arm1 };
    Ok(DuelOutcome {
        winner,
        pulls_used,
        capped,
    })
}
