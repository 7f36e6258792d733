//! Seeded preference-profile generators.
//!
//! Agent utilities are integer ranks `1..=K` (so the minimum gap is 1);
//! callers sweep the gap with [`MarketInstance::scaled`]. All generators
//! consume a single [`MarketRng`](crate::seed::MarketRng) stream seeded from
//! `seed`: agent rows first, then arm lists.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MarketError, Result};
use crate::market::MarketInstance;
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    General,
    Spc,
    MasterlistAgents,
    MasterlistArms,
}

impl ProfileKind {
    pub const ALL: [ProfileKind; 4] = [
        ProfileKind::General,
        ProfileKind::Spc,
        ProfileKind::MasterlistAgents,
        ProfileKind::MasterlistArms,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::General => "general",
            Self::Spc => "spc",
            Self::MasterlistAgents => "masterlist-agents",
            Self::MasterlistArms => "masterlist-arms",
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProfileKind {
    type Err = MarketError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| MarketError::InvalidConfig(format!("unknown profile kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MasterlistSide {
    Agents,
    Arms,
}

/// Dispatches on `kind`. SPC requires `n == k`.
pub fn generate(kind: ProfileKind, n: usize, k: usize, seed: u64) -> Result<MarketInstance> {
    match kind {
        ProfileKind::General => gen_general(n, k, seed),
        ProfileKind::MasterlistAgents => gen_masterlist(n, k, MasterlistSide::Agents, seed),
        ProfileKind::MasterlistArms => gen_masterlist(n, k, MasterlistSide::Arms, seed),
        ProfileKind::Spc if n == k => gen_spc(n, seed),
        ProfileKind::Spc => Err(MarketError::InvalidConfig(format!(
            "SPC profiles need n == k, got n = {n}, k = {k}"
        ))),
    }
}

fn check_sizes(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 {
        return Err(MarketError::InvalidConfig(format!(
            "market sizes must be positive, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

fn rank_row<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let mut row: Vec<f64> = (1..=k).map(|v| v as f64).collect();
    row.shuffle(rng);
    row
}

fn shuffled<R: Rng>(len: usize, rng: &mut R) -> Vec<usize> {
    let mut v: Vec<usize> = (0..len).collect();
    v.shuffle(rng);
    v
}

/// Independent uniform rank permutations for every agent row and every arm list.
pub fn gen_general(n: usize, k: usize, seed: u64) -> Result<MarketInstance> {
    check_sizes(n, k)?;
    let mut rng = rng_from_seed(seed);
    let utilities = (0..n).map(|_| rank_row(k, &mut rng)).collect();
    let prefs = (0..k).map(|_| shuffled(n, &mut rng)).collect();
    MarketInstance::new(utilities, prefs)
}

/// One side shares a single random ranking; the other side is uniform.
pub fn gen_masterlist(n: usize, k: usize, side: MasterlistSide, seed: u64) -> Result<MarketInstance> {
    check_sizes(n, k)?;
    let mut rng = rng_from_seed(seed);
    let (utilities, prefs) = match side {
        MasterlistSide::Agents => {
            let common = rank_row(k, &mut rng);
            let utilities = vec![common; n];
            (utilities, (0..k).map(|_| shuffled(n, &mut rng)).collect())
        }
        MasterlistSide::Arms => {
            let utilities = (0..n).map(|_| rank_row(k, &mut rng)).collect();
            let common = shuffled(n, &mut rng);
            (utilities, vec![common; k])
        }
    };
    MarketInstance::new(utilities, prefs)
}

/// Random N×N profile satisfying SPC under a random pairing order.
///
/// Draws random agent and arm orders `π`, `σ`; the agent at position `r`
/// gets a uniform ranking with `σ[r]` then lifted above every `σ[s]`, `s > r`
/// (and symmetrically for arms). Such profiles have a unique stable matching.
pub fn gen_spc(n: usize, seed: u64) -> Result<MarketInstance> {
    check_sizes(n, n)?;
    let mut rng = rng_from_seed(seed);
    let agent_order = shuffled(n, &mut rng);
    let arm_order = shuffled(n, &mut rng);

    let mut utilities = vec![Vec::new(); n];
    for (r, &agent) in agent_order.iter().enumerate() {
        let ranking = lifted_ranking(&arm_order, r, &mut rng);
        let mut row = vec![0.0; n];
        for (pos, &arm) in ranking.iter().enumerate() {
            row[arm] = (n - pos) as f64;
        }
        utilities[agent] = row;
    }
    let mut prefs = vec![Vec::new(); n];
    for (r, &arm) in arm_order.iter().enumerate() {
        prefs[arm] = lifted_ranking(&agent_order, r, &mut rng);
    }
    MarketInstance::new(utilities, prefs)
}

/// Uniform best-first ranking of `order`'s items, with `order[r]` moved above all of `order[r+1..]`.
fn lifted_ranking<R: Rng>(order: &[usize], r: usize, rng: &mut R) -> Vec<usize> {
    let mut ranking = order.to_vec();
    ranking.shuffle(rng);
    let later = &order[r..];
    let first_later = ranking
        .iter()
        .position(|x| later.contains(x))
        .expect("order[r] itself is in the ranking");
    let own = ranking
        .iter()
        .position(|&x| x == order[r])
        .expect("order[r] is in the ranking");
    ranking.swap(first_later, own);
    ranking
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::min_gap;
    use crate::structure::check_spc;

    fn is_rank_row(row: &[f64]) -> bool {
        let mut v: Vec<i64> = row.iter().map(|&x| x as i64).collect();
        v.sort_unstable();
        v == (1..=row.len() as i64).collect::<Vec<_>>()
    }

    #[test]
    fn general_rows_are_rank_permutations() {
        let inst = gen_general(20, 20, 3).unwrap();
        assert!((0..20).all(|i| is_rank_row(inst.utility_row(i))));
        assert_eq!(min_gap(&inst).unwrap(), 1.0);
    }

    #[test]
    fn generators_are_deterministic() {
        for kind in ProfileKind::ALL {
            let a = generate(kind, 6, 6, 11).unwrap();
            let b = generate(kind, 6, 6, 11).unwrap();
            assert_eq!(a, b, "{kind}");
        }
        assert_ne!(gen_general(6, 6, 1).unwrap(), gen_general(6, 6, 2).unwrap());
    }

    #[test]
    fn top_arm_is_uniform() {
        let mut counts = [0usize; 3];
        let mut rows = 0;
        for seed in 0..1000 {
            let inst = gen_general(3, 3, seed).unwrap();
            for i in 0..3 {
                assert!(is_rank_row(inst.utility_row(i)));
                counts[inst.agent_prefs(i)[0]] += 1;
                rows += 1;
            }
        }
        for c in counts {
            let freq = c as f64 / rows as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.05, "frequency {freq}");
        }
    }

    #[test]
    fn masterlist_agents_share_ranking() {
        let inst = gen_masterlist(5, 7, MasterlistSide::Agents, 4).unwrap();
        let first = inst.agent_prefs(0);
        assert!((1..5).all(|i| inst.agent_prefs(i) == first));
        let square = gen_masterlist(6, 6, MasterlistSide::Agents, 4).unwrap();
        assert!(check_spc(&square).is_some());
    }

    #[test]
    fn masterlist_arms_share_list() {
        let inst = gen_masterlist(5, 3, MasterlistSide::Arms, 9).unwrap();
        assert!((1..3).all(|j| inst.arm_prefs(j) == inst.arm_prefs(0)));
        let square = gen_masterlist(6, 6, MasterlistSide::Arms, 9).unwrap();
        assert!(check_spc(&square).is_some());
    }

    #[test]
    fn spc_generator_passes_check() {
        for seed in 0..50 {
            assert!(check_spc(&gen_spc(5, seed).unwrap()).is_some());
        }
        let one = gen_spc(1, 0).unwrap();
        assert_eq!(check_spc(&one), Some(vec![(0, 0)]));
    }

    #[test]
    fn spc_needs_square_market() {
        assert!(generate(ProfileKind::Spc, 3, 4, 0).is_err());
        assert!(gen_general(0, 3, 0).is_err());
    }

    #[test]
    fn kind_round_trips_through_str() {
        for kind in ProfileKind::ALL {
            assert_eq!(kind.as_str().parse::<ProfileKind>().unwrap(), kind);
        }
        assert!("zipf".parse::<ProfileKind>().is_err());
    }
}
