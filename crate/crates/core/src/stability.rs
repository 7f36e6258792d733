//! Deferred acceptance, blocking pairs, envy sets and stable regret.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::market::{MarketInstance, Matching, Side};

/// Runs deferred acceptance with the given proposing side.
///
/// Agents rank arms by the instance utilities (true or estimated); arms use
/// their fixed lists. The result is optimal for the proposing side among all
/// stable matchings of these preferences.
pub fn da_match(instance: &MarketInstance, side: Side) -> Matching {
    match side {
        Side::AgentProposing => agent_proposing(instance),
        Side::ArmProposing => arm_proposing(instance),
    }
}

fn agent_proposing(instance: &MarketInstance) -> Matching {
    let (n, k) = (instance.n_agents(), instance.n_arms());
    let prefs: Vec<Vec<usize>> = (0..n).map(|i| instance.agent_prefs(i)).collect();
    let mut next = vec![0usize; n];
    let mut m = Matching::empty(n, k);
    let mut free: Vec<usize> = (0..n).rev().collect();
    while let Some(agent) = free.pop() {
        let Some(&arm) = prefs[agent].get(next[agent]) else {
            continue;
        };
        next[agent] += 1;
        let held = m.agent_of(arm);
        if instance.arm_prefers(arm, agent, held) {
            if let Some(prev) = held {
                m.unassign_agent(prev);
                free.push(prev);
            }
            m.assign(agent, arm);
        } else {
            free.push(agent);
        }
    }
    m
}

fn arm_proposing(instance: &MarketInstance) -> Matching {
    let (n, k) = (instance.n_agents(), instance.n_arms());
    let mut next = vec![0usize; k];
    let mut m = Matching::empty(n, k);
    let mut free: Vec<usize> = (0..k).rev().collect();
    while let Some(arm) = free.pop() {
        let Some(&agent) = instance.arm_prefs(arm).get(next[arm]) else {
            continue;
        };
        next[arm] += 1;
        let held = m.arm_of(agent);
        if instance.agent_prefers(agent, arm, held) {
            if let Some(prev) = held {
                free.push(prev);
            }
            m.assign(agent, arm);
        } else {
            free.push(arm);
        }
    }
    m
}

/// All pairs `(agent, arm)` that prefer each other to their partners in `m`.
/// Being unmatched is worse than any partner on both sides.
pub fn blocking_pairs(instance: &MarketInstance, m: &Matching) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..instance.n_agents() {
        let mine = m.arm_of(i);
        for j in 0..instance.n_arms() {
            if Some(j) != mine && instance.agent_prefers(i, j, mine) && instance.arm_prefers(j, i, m.agent_of(j)) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn is_stable(instance: &MarketInstance, m: &Matching) -> bool {
    blocking_pairs(instance, m).is_empty()
}

/// Agent–arm pairs whose sampling determines whether a matching is stable.
///
/// For each agent the local set holds every arm that prefers the agent to its
/// current partner; when that set is non-empty the agent's own partner joins it.
/// Only arm preferences and the matching matter, not agent utilities.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EnvySet {
    pairs: BTreeSet<(usize, usize)>,
}

impl EnvySet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, agent: usize, arm: usize) -> bool {
        self.pairs.contains(&(agent, arm))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }
}

pub fn envy_set(instance: &MarketInstance, m: &Matching) -> EnvySet {
    let mut pairs = BTreeSet::new();
    for i in 0..instance.n_agents() {
        let local: Vec<usize> = (0..instance.n_arms())
            .filter(|&j| instance.arm_prefers(j, i, m.agent_of(j)))
            .collect();
        if local.is_empty() {
            continue;
        }
        pairs.extend(local.into_iter().map(|j| (i, j)));
        if let Some(own) = m.arm_of(i) {
            pairs.insert((i, own));
        }
    }
    EnvySet { pairs }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegretReference {
    /// Measured against the agent-proposing DA outcome.
    AgentOptimal,
    /// Measured against the arm-proposing DA outcome.
    AgentPessimal,
}

impl RegretReference {
    pub fn side(self) -> Side {
        match self {
            Self::AgentOptimal => Side::AgentProposing,
            Self::AgentPessimal => Side::ArmProposing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretVector {
    pub reference: RegretReference,
    pub values: Vec<f64>,
}

impl RegretVector {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Per-agent stable regret of `m` against the reference stable matching of the true instance.
/// Signed; an unmatched agent scores utility 0.
pub fn regret(instance: &MarketInstance, m: &Matching, reference: RegretReference) -> RegretVector {
    let target = da_match(instance, reference.side());
    regret_against(instance, m, &target, reference)
}

/// Same as [`regret`] with a precomputed reference matching.
pub fn regret_against(
    instance: &MarketInstance,
    m: &Matching,
    target: &Matching,
    reference: RegretReference,
) -> RegretVector {
    let value = |mm: &Matching, i: usize| mm.arm_of(i).map_or(0.0, |j| instance.utility(i, j));
    RegretVector {
        reference,
        values: (0..instance.n_agents())
            .map(|i| value(target, i) - value(m, i))
            .collect(),
    }
}
