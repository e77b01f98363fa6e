//! Boosting e-values: truncation onto the rejection grid, closed-form
//! boosting factors for Gaussian likelihood ratios, and p-to-e transforms.

pub mod boosted;
pub mod gaussian;
pub mod table;
pub mod transform;
pub mod truncation;

pub use boosted::BoostedOnlineEbh;
pub use gaussian::{expected_truncated_value, solve_boost_factor, BoostFactor, BoostFamily, GaussianLrModel};
pub use table::BoostTable;
pub use transform::{
    check_transform_condition, ConditionMode, ConditionOutcome, FnTransform, NonincreasingTransform, Reciprocal,
    ShapeTransform, Verdict, ZeroTransform,
};
pub use truncation::{Truncation, TruncationSpec};
