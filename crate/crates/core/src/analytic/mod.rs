//! Deterministic analytic layer: tails, their inverses, constants and normalizers.

mod constants;
mod normalizers;
mod params;
mod psi;
mod tail;

pub use constants::{c_ab, k_ab, marginal_time_exponent, ml_moment_closed_form};
pub use normalizers::{normalizers, theta_n, theta_n_alternative, NormalizerTable};
pub use params::{AuxSlowlyVarying, ModelParams, StepSlowlyVarying};
pub use psi::{psi, psi_tilde, r_m};
pub use tail::{
    g, h, log_tail_exponent, log_tail_exponent_inverse, scr_l, tail_h_bar, tail_nu_bar,
    truncation_level, v, v1, TruncatedV,
};
