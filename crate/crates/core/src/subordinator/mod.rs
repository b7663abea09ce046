//! β-stable subordinators, their inverses and the regenerative sets they generate.

mod moments;
mod path;
mod regenerative;
mod stable;

pub use moments::{ml_fractional_moment, McEstimate};
pub use path::SubordinatorPath;
pub use regenerative::{sample_regenerative, RegenerativeSetSample, DEFAULT_DT};
pub use stable::{sample_shift_start, sample_stable, shift_from_uniform, Crossing, PassageSampler};
