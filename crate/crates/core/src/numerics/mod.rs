//! Special functions and quadrature.

mod bessel;
mod halfint;
mod quadrature;
mod wigner;

pub use bessel::{bessel_j, bessel_j_upto};
pub use halfint::{i_pow, HalfInt};
pub use quadrature::{
    integrate_sqrt_singular, integrate_sqrt_singular_tol, sine_substitution_nodes, trapezoid_weights, SingularInterval,
    DEFAULT_TOLERANCE, MAX_NODES,
};
pub use wigner::{wigner_d_half, wigner_d_one};

/// Clamp a cosine that drifted just past ±1; anything further out is `None`.
pub fn clamp_cos(c: f64) -> Option<f64> {
    const GUARD: f64 = 1e-12;
    if !c.is_finite() || c.abs() > 1.0 + GUARD {
        None
    } else {
        Some(c.clamp(-1.0, 1.0))
    }
}
