//! Learning procedures: uniform exploration with a DA commit, pairwise duels, and AE arm-DA.

mod ae;
mod duel;
mod uniform;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use ae::{ae_arm_da, AeOutcome, DuelRecord};
pub use duel::{duel, DuelOutcome};
pub use uniform::{commit_match, uniform_explore, ExploreOutcome, Schedule, StopReason};

use crate::error::MarketError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    UniformAgentDa,
    UniformArmDa,
    AeArmDa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::UniformAgentDa, Algorithm::UniformArmDa, Algorithm::AeArmDa];

    pub fn tag(self) -> &'static str {
        match self {
            Self::UniformAgentDa => "uniform-agent-da",
            Self::UniformArmDa => "uniform-arm-da",
            Self::AeArmDa => "ae-arm-da",
        }
    }

    /// Name of the sampling stage; both uniform variants share one exploration run.
    pub fn sampler_tag(self) -> &'static str {
        match self {
            Self::UniformAgentDa | Self::UniformArmDa => "uniform",
            Self::AeArmDa => "ae",
        }
    }

    pub fn is_uniform(self) -> bool {
        !matches!(self, Self::AeArmDa)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = MarketError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| MarketError::InvalidConfig(format!("unknown algorithm {s:?}")))
    }
}
