//! Small hand-built markets with known answers, shared by tests, benches and the CLI docs.

use crate::market::{MarketInstance, Matching};

/// 3×3 market with a unique stable matching `(a1,b2),(a2,b1),(a3,b3)`.
/// Utilities are ranks (3 = best).
pub fn three_by_three() -> MarketInstance {
    MarketInstance::new(
        vec![vec![3.0, 2.0, 1.0], vec![2.0, 3.0, 1.0], vec![3.0, 2.0, 1.0]],
        vec![vec![1, 2, 0], vec![0, 2, 1], vec![0, 1, 2]],
    )
    .expect("fixture is valid")
}

/// Every agent gets its top arm; blocked by `(a3,b1)` in [`three_by_three`].
pub fn three_by_three_star() -> Matching {
    Matching::from_pairs(3, 3, &[(0, 0), (1, 1), (2, 2)]).expect("fixture is valid")
}

/// 2×2 market whose only stable matching is `(a1,b1),(a2,b2)`.
pub fn two_by_two_unique() -> MarketInstance {
    MarketInstance::new(vec![vec![2.0, 1.0], vec![2.0, 1.0]], vec![vec![0, 1], vec![1, 0]]).expect("fixture is valid")
}

/// [`two_by_two_unique`] with agent 1's estimate flipped to prefer `b2`.
pub fn two_by_two_flipped_estimate() -> MarketInstance {
    two_by_two_unique()
        .with_utilities(vec![vec![1.0, 2.0], vec![2.0, 1.0]])
        .expect("fixture is valid")
}

/// 2×2 market with two stable matchings (agents and arms disagree).
pub fn opposing_two_by_two() -> MarketInstance {
    MarketInstance::new(vec![vec![2.0, 1.0], vec![1.0, 2.0]], vec![vec![1, 0], vec![0, 1]]).expect("fixture is valid")
}
