//! Market instances and matchings.
//!
//! Indices are 0-based in memory. The JSON file formats use 1-based agent and
//! arm indices so that `a_1` / `b_1` in a file means index 0 here.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{MarketError, Result};

/// True agent utilities over arms plus the arms' ordinal preferences over agents.
///
/// Agents rank arms by utility (higher is better); ties within a row are
/// rejected. Arms rank agents by an explicit best-first list.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketInstance {
    n_agents: usize,
    n_arms: usize,
    utilities: Vec<f64>,
    arm_prefs: Vec<Vec<usize>>,
    // arm_rank[j][i] = position of agent i in arm j's list, 0 = most preferred
    arm_rank: Vec<Vec<usize>>,
}

impl MarketInstance {
    /// Builds an instance from an N×K utility matrix and K best-first agent lists (0-based).
    pub fn new(utilities: Vec<Vec<f64>>, arm_prefs: Vec<Vec<usize>>) -> Result<Self> {
        let n_agents = utilities.len();
        if n_agents == 0 {
            return Err(MarketError::InvalidInstance("no agents".into()));
        }
        let n_arms = utilities[0].len();
        if n_arms == 0 {
            return Err(MarketError::InvalidInstance("no arms".into()));
        }
        let mut flat = Vec::with_capacity(n_agents * n_arms);
        for (i, row) in utilities.iter().enumerate() {
            if row.len() != n_arms {
                return Err(MarketError::InvalidInstance(format!(
                    "utility row {} has {} entries, expected {n_arms}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(MarketError::InvalidInstance(format!(
                    "utility row {} contains non-finite value {v}",
                    i + 1
                )));
            }
            check_strict_row(i, row)?;
            flat.extend_from_slice(row);
        }
        let arm_rank = rank_tables(n_agents, n_arms, &arm_prefs)?;
        Ok(Self {
            n_agents,
            n_arms,
            utilities: flat,
            arm_prefs,
            arm_rank,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    pub fn utility(&self, agent: usize, arm: usize) -> f64 {
        self.utilities[agent * self.n_arms + arm]
    }

    pub fn utility_row(&self, agent: usize) -> &[f64] {
        &self.utilities[agent * self.n_arms..(agent + 1) * self.n_arms]
    }

    pub fn utility_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_agents).map(|i| self.utility_row(i).to_vec()).collect()
    }

    /// Best-first agent list of `arm`.
    pub fn arm_prefs(&self, arm: usize) -> &[usize] {
        &self.arm_prefs[arm]
    }

    pub fn all_arm_prefs(&self) -> &[Vec<usize>] {
        &self.arm_prefs
    }

    /// Position of `agent` in `arm`'s list (0 = top choice).
    pub fn arm_rank(&self, arm: usize, agent: usize) -> usize {
        self.arm_rank[arm][agent]
    }

    /// Arms sorted from most to least preferred by `agent`.
    pub fn agent_prefs(&self, agent: usize) -> Vec<usize> {
        let row = self.utility_row(agent);
        let mut order: Vec<usize> = (0..self.n_arms).collect();
        order.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
        order
    }

    /// Whether `agent` strictly prefers `arm` to `current` (any arm beats being unmatched).
    pub fn agent_prefers(&self, agent: usize, arm: usize, current: Option<usize>) -> bool {
        match current {
            None => true,
            Some(c) => self.utility(agent, arm) > self.utility(agent, c),
        }
    }

    /// Whether `arm` strictly prefers `agent` to `current` (any agent beats being unmatched).
    pub fn arm_prefers(&self, arm: usize, agent: usize, current: Option<usize>) -> bool {
        match current {
            None => true,
            Some(c) => self.arm_rank[arm][agent] < self.arm_rank[arm][c],
        }
    }

    /// Same arm preferences, different (e.g. estimated) agent utilities.
    pub fn with_utilities(&self, utilities: Vec<Vec<f64>>) -> Result<Self> {
        if utilities.len() != self.n_agents {
            return Err(MarketError::InvalidInstance(format!(
                "estimated utilities have {} rows, expected {}",
                utilities.len(),
                self.n_agents
            )));
        }
        Self::new(utilities, self.arm_prefs.clone())
    }

    /// Multiplies every utility by `factor` (> 0), scaling the minimum gap by the same factor.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(MarketError::InvalidInstance(format!(
                "scale factor must be positive and finite, got {factor}"
            )));
        }
        let mut out = self.clone();
        out.utilities.iter_mut().for_each(|u| *u *= factor);
        Ok(out)
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            n_agents: self.n_agents,
            n_arms: self.n_arms,
            utilities: self.utility_rows(),
            arm_prefs: self
                .arm_prefs
                .iter()
                .map(|list| list.iter().map(|&i| i + 1).collect())
                .collect(),
        }
    }

    pub fn from_file(file: InstanceFile) -> Result<Self> {
        if file.utilities.len() != file.n_agents {
            return Err(MarketError::InvalidInstance(format!(
                "n_agents = {} but {} utility rows",
                file.n_agents,
                file.utilities.len()
            )));
        }
        if file.arm_prefs.len() != file.n_arms {
            return Err(MarketError::InvalidInstance(format!(
                "n_arms = {} but {} arm preference lists",
                file.n_arms,
                file.arm_prefs.len()
            )));
        }
        if file.utilities.iter().any(|r| r.len() != file.n_arms) {
            return Err(MarketError::InvalidInstance(
                "utility row length differs from n_arms".into(),
            ));
        }
        let prefs = file
            .arm_prefs
            .iter()
            .map(|list| {
                list.iter()
                    .map(|&i| {
                        i.checked_sub(1)
                            .ok_or_else(|| MarketError::InvalidInstance("agent index 0 in arm_prefs".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.utilities, prefs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json();
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

fn check_strict_row(agent: usize, row: &[f64]) -> Result<()> {
    let mut sorted = row.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(MarketError::InvalidInstance(format!(
            "utility row {} contains ties",
            agent + 1
        )));
    }
    Ok(())
}

fn rank_tables(n_agents: usize, n_arms: usize, arm_prefs: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    if arm_prefs.len() != n_arms {
        return Err(MarketError::InvalidInstance(format!(
            "{} arm preference lists for {n_arms} arms",
            arm_prefs.len()
        )));
    }
    arm_prefs
        .iter()
        .enumerate()
        .map(|(j, list)| {
            let mut rank = vec![usize::MAX; n_agents];
            if list.len() != n_agents {
                return Err(MarketError::InvalidInstance(format!(
                    "arm {} ranks {} agents, expected {n_agents}",
                    j + 1,
                    list.len()
                )));
            }
            for (pos, &agent) in list.iter().enumerate() {
                if agent >= n_agents || rank[agent] != usize::MAX {
                    return Err(MarketError::InvalidInstance(format!(
                        "arm {} preference list is not a permutation of agents",
                        j + 1
                    )));
                }
                rank[agent] = pos;
            }
            Ok(rank)
        })
        .collect()
}

/// Minimum utility difference any agent has between two distinct arms.
pub fn min_gap(instance: &MarketInstance) -> Result<f64> {
    if instance.n_arms() < 2 {
        return Err(MarketError::GapUndefined);
    }
    let gap = (0..instance.n_agents())
        .map(|i| {
            let mut row = instance.utility_row(i).to_vec();
            row.sort_by(f64::total_cmp);
            row.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min);
    Ok(gap)
}

/// On-disk instance layout (1-based agent indices in `arm_prefs`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n_agents: usize,
    pub n_arms: usize,
    pub utilities: Vec<Vec<f64>>,
    pub arm_prefs: Vec<Vec<usize>>,
}

/// Which side proposes in deferred acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    AgentProposing,
    ArmProposing,
}

/// A one-to-one partial matching between agents and arms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    agent_to_arm: Vec<Option<usize>>,
    arm_to_agent: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n_agents: usize, n_arms: usize) -> Self {
        Self {
            agent_to_arm: vec![None; n_agents],
            arm_to_agent: vec![None; n_arms],
        }
    }

    /// Builds a matching from 0-based `(agent, arm)` pairs, rejecting reuse of either side.
    pub fn from_pairs(n_agents: usize, n_arms: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::empty(n_agents, n_arms);
        for &(i, j) in pairs {
            if i >= n_agents || j >= n_arms {
                return Err(MarketError::InvalidMatching(format!(
                    "pair ({}, {}) out of range",
                    i + 1,
                    j + 1
                )));
            }
            if m.agent_to_arm[i].is_some() || m.arm_to_agent[j].is_some() {
                return Err(MarketError::InvalidMatching(format!(
                    "pair ({}, {}) reuses a matched participant",
                    i + 1,
                    j + 1
                )));
            }
            m.link(i, j);
        }
        Ok(m)
    }

    /// Builds a matching from an agent-indexed assignment vector.
    pub fn from_agent_assignment(n_arms: usize, assignment: &[Option<usize>]) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = assignment
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.map(|j| (i, j)))
            .collect();
        Self::from_pairs(assignment.len(), n_arms, &pairs)
    }

    pub fn n_agents(&self) -> usize {
        self.agent_to_arm.len()
    }

    pub fn n_arms(&self) -> usize {
        self.arm_to_agent.len()
    }

    pub fn arm_of(&self, agent: usize) -> Option<usize> {
        self.agent_to_arm[agent]
    }

    pub fn agent_of(&self, arm: usize) -> Option<usize> {
        self.arm_to_agent[arm]
    }

    pub fn agent_assignment(&self) -> &[Option<usize>] {
        &self.agent_to_arm
    }

    /// Matched pairs in agent order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.agent_to_arm
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.map(|j| (i, j)))
            .collect()
    }

    pub fn size(&self) -> usize {
        self.agent_to_arm.iter().flatten().count()
    }

    pub fn unmatched_arms(&self) -> Vec<usize> {
        (0..self.n_arms()).filter(|&j| self.arm_to_agent[j].is_none()).collect()
    }

    pub fn unmatched_agents(&self) -> Vec<usize> {
        (0..self.n_agents())
            .filter(|&i| self.agent_to_arm[i].is_none())
            .collect()
    }

    /// Matches `agent` with `arm`, first dissolving any pairs either was in.
    pub fn assign(&mut self, agent: usize, arm: usize) {
        self.unassign_agent(agent);
        if let Some(prev) = self.arm_to_agent[arm] {
            self.agent_to_arm[prev] = None;
        }
        self.link(agent, arm);
    }

    pub fn unassign_agent(&mut self, agent: usize) -> Option<usize> {
        let arm = self.agent_to_arm[agent].take()?;
        self.arm_to_agent[arm] = None;
        Some(arm)
    }

    fn link(&mut self, agent: usize, arm: usize) {
        self.agent_to_arm[agent] = Some(arm);
        self.arm_to_agent[arm] = Some(agent);
    }

    pub fn to_file(&self) -> MatchingFile {
        MatchingFile {
            pairs: self.pairs().into_iter().map(|(i, j)| [i + 1, j + 1]).collect(),
            unmatched_arms: self.unmatched_arms().into_iter().map(|j| j + 1).collect(),
        }
    }

    pub fn from_file(n_agents: usize, n_arms: usize, file: &MatchingFile) -> Result<Self> {
        let pairs = file
            .pairs
            .iter()
            .map(|&[i, j]| match (i.checked_sub(1), j.checked_sub(1)) {
                (Some(i), Some(j)) => Ok((i, j)),
                _ => Err(MarketError::InvalidMatching("index 0 in 1-based pair".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Self::from_pairs(n_agents, n_arms, &pairs)?;
        let mut listed: Vec<usize> = file.unmatched_arms.clone();
        listed.sort_unstable();
        let actual: Vec<usize> = m.unmatched_arms().into_iter().map(|j| j + 1).collect();
        if listed != actual {
            return Err(MarketError::InvalidMatching(
                "unmatched_arms disagrees with pairs".into(),
            ));
        }
        Ok(m)
    }
}

impl fmt::Display for Matching {
    /// `(1,2);(2,1)` with 1-based indices, or `-` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self.pairs();
        if pairs.is_empty() {
            return f.write_str("-");
        }
        let parts: Vec<String> = pairs.iter().map(|(i, j)| format!("({},{})", i + 1, j + 1)).collect();
        f.write_str(&parts.join(";"))
    }
}

/// On-disk matching layout (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingFile {
    pub pairs: Vec<[usize; 2]>,
    pub unmatched_arms: Vec<usize>,
}
