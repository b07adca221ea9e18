//! Vavilov-Cherenkov emission by plane-wave and twisted (Bessel) electrons.
//!
//! Natural units throughout (hbar = c = 1), energies and momenta in eV,
//! lengths and times in 1/eV, angles in radians.
//!
//! Coefficients of evolved states are reported with the phase-space volume
//! factor set to one, so tables agree with each other up to that single
//! global constant.

// guards are written as `!(x > 0.0)` on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod amplitudes;
pub mod angular;
pub mod epa;
pub mod error;
pub mod evolved;
pub mod io;
pub mod kinematics;
pub mod numerics;
pub mod observables;
pub mod oracles;
pub mod scalar_oracle;
pub mod spin_basis;

pub use error::{Result, VcError};
pub use num_complex::Complex64;
