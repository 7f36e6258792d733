//! Brute-force enumeration of all stable matchings, used as a test oracle.

use crate::error::{MarketError, Result};
use crate::market::{MarketInstance, Matching};
use crate::stability::is_stable;

pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// All stable matchings, in lexicographic order of the agent assignment
/// (arm index ascending, "unmatched" last).
///
/// Backtracks over agents and prunes any partial assignment that already
/// contains a blocking pair between two assigned agents' partners. Only
/// maximal assignments are explored: an agent may stay unmatched only when
/// arms are scarce (K < N).
pub fn enumerate_stable(instance: &MarketInstance, cap: usize) -> Result<Vec<Matching>> {
    let (n, k) = (instance.n_agents(), instance.n_arms());
    let size = n.min(k);
    if size > cap {
        return Err(MarketError::CapExceeded { size, cap });
    }
    let mut search = Search {
        instance,
        assignment: vec![None; n],
        arm_taken: vec![false; k],
        spare_unmatched: n.saturating_sub(k),
        found: Vec::new(),
    };
    search.descend(0);
    Ok(search.found)
}

struct Search<'a> {
    instance: &'a MarketInstance,
    assignment: Vec<Option<usize>>,
    arm_taken: Vec<bool>,
    spare_unmatched: usize,
    found: Vec<Matching>,
}

impl Search<'_> {
    fn descend(&mut self, agent: usize) {
        let inst = self.instance;
        if agent == inst.n_agents() {
            let m = Matching::from_agent_assignment(inst.n_arms(), &self.assignment)
                .expect("search keeps assignments injective");
            if is_stable(inst, &m) {
                self.found.push(m);
            }
            return;
        }
        for arm in 0..inst.n_arms() {
            if self.arm_taken[arm] || self.blocks_prefix(agent, Some(arm)) {
                continue;
            }
            self.arm_taken[arm] = true;
            self.assignment[agent] = Some(arm);
            self.descend(agent + 1);
            self.assignment[agent] = None;
            self.arm_taken[arm] = false;
        }
        if self.spare_unmatched > 0 && !self.blocks_prefix(agent, None) {
            self.spare_unmatched -= 1;
            self.descend(agent + 1);
            self.spare_unmatched += 1;
        }
    }

    /// Does giving `agent` the option `choice` create a blocking pair with an earlier agent's arm?
    fn blocks_prefix(&self, agent: usize, choice: Option<usize>) -> bool {
        let inst = self.instance;
        self.assignment[..agent].iter().enumerate().any(|(other, &their)| {
            let theirs_blocked =
                their.is_some_and(|j| inst.agent_prefers(agent, j, choice) && inst.arm_prefers(j, agent, Some(other)));
            let mine_blocked =
                choice.is_some_and(|j| inst.agent_prefers(other, j, their) && inst.arm_prefers(j, other, Some(agent)));
            theirs_blocked || mine_blocked
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn unique_for_three_by_three() {
        let all = enumerate_stable(&fixtures::three_by_three(), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].pairs(), vec![(0, 1), (1, 0), (2, 2)]);
    }

    #[test]
    fn opposing_has_two() {
        let all = enumerate_stable(&fixtures::opposing_two_by_two(), 8).unwrap();
        let got: Vec<_> = all.iter().map(|m| m.pairs()).collect();
        assert_eq!(got, vec![vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]]);
    }

    #[test]
    fn single_pair() {
        let inst = MarketInstance::new(vec![vec![1.0]], vec![vec![0]]).unwrap();
        let all = enumerate_stable(&inst, 8).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].pairs(), vec![(0, 0)]);
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_stable(&fixtures::three_by_three(), 2).unwrap_err();
        assert!(matches!(err, MarketError::CapExceeded { size: 3, cap: 2 }));
    }

    #[test]
    fn unbalanced_markets() {
        // three agents all want the single arm; the arm picks agent 2
        let inst = MarketInstance::new(vec![vec![1.0], vec![2.0], vec![3.0]], vec![vec![1, 0, 2]]).unwrap();
        let all = enumerate_stable(&inst, 8).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].pairs(), vec![(1, 0)]);

        let inst = MarketInstance::new(vec![vec![1.0, 3.0, 2.0]], vec![vec![0], vec![0], vec![0]]).unwrap();
        let all = enumerate_stable(&inst, 8).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].pairs(), vec![(0, 1)]);
    }
}
