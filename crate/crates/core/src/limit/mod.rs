//! The limiting random sup-measure and its closed-form laws.

mod formulas;
mod sample;

pub use formulas::{
    counterexample_check, joint_increment_prob, marginal_cdf, scalar_convexity, CounterexampleResult,
    DEFAULT_NODES,
};
pub use sample::{sample_limit, LimitSample, MarkMode, Window};
