//! Two-sided matching markets where agents learn their utilities from noisy pulls.
//!
//! The crate covers the market model ([`market`]), deferred acceptance and
//! stability checks ([`stability`]), brute-force enumeration of stable
//! matchings ([`enumerate`]), structural conditions on preferences
//! ([`structure`]), random preference profiles ([`profile`]), the stochastic
//! reward environment ([`bandit`]), the learning procedures ([`algorithms`])
//! and a Monte Carlo harness ([`harness`]).

pub mod algorithms;
pub mod bandit;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod market;
pub mod profile;
pub mod seed;
pub mod stability;
pub mod structure;

pub use error::{MarketError, Result};
pub use market::{min_gap, MarketInstance, Matching, Side};
pub use stability::{blocking_pairs, da_match, envy_set, is_stable, regret};
