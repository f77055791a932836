//! Special functions and quadrature shared by the analytic evaluators.
//!
//! Everything here is pure: identical inputs give bit-identical outputs.

mod expint;
mod gamma;
mod quadrature;

pub use expint::{ei_scaled, expint_ei};
pub use gamma::{ln_gamma, lower_gamma_scaled, lower_incomplete_gamma};
pub use quadrature::{chebyshev_rule, QuadratureRule};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const MAX_ITER: usize = 1000;
