//! Renewal realization of the zero sets of the driving Markov chains.

mod intersections;
mod law;
mod set;

pub use intersections::{
    default_budget, disjointify, estimate_p_bar, find_intersections, first_meeting, IntersectionRecord,
    PBarEstimate,
};
pub use law::StepLaw;
pub use set::{decode, encode, intersect, sample_zero_set, ZeroSet};
