//! Preference-structure checks: the sequence preference condition (SPC) and the α-condition.

use crate::enumerate::enumerate_stable;
use crate::error::Result;
use crate::market::{MarketInstance, Matching};

/// A simultaneous ordering of agents and arms, as `(agent, arm)` pairs in rank order.
pub type PairOrdering = Vec<(usize, usize)>;

/// Whether `ordering` witnesses SPC: every earlier agent prefers its paired arm
/// to every later arm, and every earlier arm prefers its paired agent to every later agent.
pub fn is_spc_ordering(instance: &MarketInstance, ordering: &[(usize, usize)]) -> bool {
    let n = instance.n_agents();
    if n != instance.n_arms() || ordering.len() != n {
        return false;
    }
    let mut seen_agents = vec![false; n];
    let mut seen_arms = vec![false; n];
    for &(i, j) in ordering {
        if i >= n || j >= n || seen_agents[i] || seen_arms[j] {
            return false;
        }
        seen_agents[i] = true;
        seen_arms[j] = true;
    }
    ordering.iter().enumerate().all(|(r, &(i, j))| {
        ordering[r + 1..].iter().all(|&(later_agent, later_arm)| {
            instance.agent_prefers(i, j, Some(later_arm)) && instance.arm_prefers(j, i, Some(later_agent))
        })
    })
}

/// Finds an SPC ordering by repeatedly removing a mutual-top pair, lowest agent index first.
///
/// Returns `None` when N ≠ K or no ordering exists. Removing any mutual-top
/// pair keeps an existing ordering valid on the rest, so the peel is complete.
pub fn check_spc(instance: &MarketInstance) -> Option<PairOrdering> {
    let n = instance.n_agents();
    if n != instance.n_arms() {
        return None;
    }
    let agent_prefs: Vec<Vec<usize>> = (0..n).map(|i| instance.agent_prefs(i)).collect();
    let mut agent_left = vec![true; n];
    let mut arm_left = vec![true; n];
    let mut ordering = Vec::with_capacity(n);
    for _ in 0..n {
        let top_arm = |i: usize| agent_prefs[i].iter().copied().find(|&j| arm_left[j]);
        let top_agent = |j: usize| instance.arm_prefs(j).iter().copied().find(|&i| agent_left[i]);
        let pair = (0..n)
            .filter(|&i| agent_left[i])
            .find_map(|i| top_arm(i).filter(|&j| top_agent(j) == Some(i)).map(|j| (i, j)))?;
        agent_left[pair.0] = false;
        arm_left[pair.1] = false;
        ordering.push(pair);
    }
    Some(ordering)
}

/// Exhaustive backtracking search for an SPC ordering; cross-checks [`check_spc`] on small markets.
pub fn spc_ordering_exhaustive(instance: &MarketInstance) -> Option<PairOrdering> {
    let n = instance.n_agents();
    if n != instance.n_arms() {
        return None;
    }
    fn extend(
        instance: &MarketInstance,
        prefix: &mut PairOrdering,
        agent_used: &mut [bool],
        arm_used: &mut [bool],
    ) -> bool {
        let n = agent_used.len();
        if prefix.len() == n {
            return true;
        }
        for i in 0..n {
            if agent_used[i] {
                continue;
            }
            for j in 0..n {
                if arm_used[j] {
                    continue;
                }
                let fits = prefix
                    .iter()
                    .all(|&(pi, pj)| instance.agent_prefers(pi, pj, Some(j)) && instance.arm_prefers(pj, pi, Some(i)));
                if !fits {
                    continue;
                }
                agent_used[i] = true;
                arm_used[j] = true;
                prefix.push((i, j));
                if extend(instance, prefix, agent_used, arm_used) {
                    return true;
                }
                prefix.pop();
                agent_used[i] = false;
                arm_used[j] = false;
            }
        }
        false
    }
    let mut prefix = Vec::with_capacity(n);
    extend(instance, &mut prefix, &mut vec![false; n], &mut vec![false; n]).then_some(prefix)
}

/// α-condition: some stable matching admits an agent-side ordering (each agent
/// prefers its partner to every later arm) and an arm-side ordering (each arm
/// prefers its partner to every later agent). Stable matchings come from the
/// enumeration oracle, so `cap` bounds min(N, K).
pub fn check_alpha(instance: &MarketInstance, cap: usize) -> Result<bool> {
    let stable = enumerate_stable(instance, cap)?;
    Ok(stable
        .iter()
        .any(|m| agent_side_ordering(instance, m).is_some() && arm_side_ordering(instance, m).is_some()))
}

/// Greedy agent-side ordering for `m`: matched agents whose partner is their top
/// remaining arm are peeled first; unmatched arms always remain.
pub fn agent_side_ordering(instance: &MarketInstance, m: &Matching) -> Option<Vec<usize>> {
    let mut left: Vec<usize> = (0..instance.n_agents()).filter(|&i| m.arm_of(i).is_some()).collect();
    let mut arm_left = vec![true; instance.n_arms()];
    let mut order = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let pos = left.iter().position(|&i| {
            let own = m.arm_of(i).expect("filtered to matched agents");
            (0..instance.n_arms())
                .filter(|&j| arm_left[j] && j != own)
                .all(|j| instance.agent_prefers(i, own, Some(j)))
        })?;
        let agent = left.remove(pos);
        arm_left[m.arm_of(agent).expect("matched")] = false;
        order.push(agent);
    }
    Some(order)
}

/// Greedy arm-side ordering for `m`, symmetric to [`agent_side_ordering`].
pub fn arm_side_ordering(instance: &MarketInstance, m: &Matching) -> Option<Vec<usize>> {
    let mut left: Vec<usize> = (0..instance.n_arms()).filter(|&j| m.agent_of(j).is_some()).collect();
    let mut agent_left = vec![true; instance.n_agents()];
    let mut order = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let pos = left.iter().position(|&j| {
            let own = m.agent_of(j).expect("filtered to matched arms");
            (0..instance.n_agents())
                .filter(|&i| agent_left[i] && i != own)
                .all(|i| instance.arm_prefers(j, own, Some(i)))
        })?;
        let arm = left.remove(pos);
        agent_left[m.agent_of(arm).expect("matched")] = false;
        order.push(arm);
    }
    Some(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn three_by_three_has_no_spc_and_no_alpha() {
        let inst = fixtures::three_by_three();
        assert_eq!(check_spc(&inst), None);
        assert_eq!(spc_ordering_exhaustive(&inst), None);
        assert!(!check_alpha(&inst, 8).unwrap());
    }

    #[test]
    fn opposing_fails_alpha() {
        assert!(!check_alpha(&fixtures::opposing_two_by_two(), 8).unwrap());
    }

    #[test]
    fn single_pair_identity() {
        let inst = MarketInstance::new(vec![vec![1.0]], vec![vec![0]]).unwrap();
        assert_eq!(check_spc(&inst), Some(vec![(0, 0)]));
        assert!(check_alpha(&inst, 8).unwrap());
    }

    #[test]
    fn unique_two_by_two_is_spc() {
        let inst = fixtures::two_by_two_unique();
        let ord = check_spc(&inst).unwrap();
        assert_eq!(ord, vec![(0, 0), (1, 1)]);
        assert!(is_spc_ordering(&inst, &ord));
        assert!(check_alpha(&inst, 8).unwrap());
    }

    #[test]
    fn masterlist_agents_is_spc() {
        // every agent ranks b3 > b1 > b2
        let row = vec![2.0, 1.0, 3.0];
        let inst = MarketInstance::new(
            vec![row.clone(), row.clone(), row],
            vec![vec![2, 0, 1], vec![0, 1, 2], vec![1, 2, 0]],
        )
        .unwrap();
        let ord = check_spc(&inst).unwrap();
        assert!(is_spc_ordering(&inst, &ord));
        assert_eq!(ord[0], (1, 2));
    }

    #[test]
    fn non_square_has_no_spc() {
        let inst = MarketInstance::new(vec![vec![1.0, 2.0]], vec![vec![0], vec![0]]).unwrap();
        assert_eq!(check_spc(&inst), None);
    }
}
