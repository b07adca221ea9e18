use std::f64::consts::FRAC_1_SQRT_2;

use super::HalfInt;
use crate::error::{domain, Result};

/// Small Wigner matrix `d^{1/2}_{sigma lambda}(theta)`.
pub fn wigner_d_half(sigma: HalfInt, lambda: HalfInt, theta: f64) -> Result<f64> {
    if !sigma.is_spin_half() || !lambda.is_spin_half() {
        return domain(format!("spin-1/2 labels must be ±1/2, got ({sigma}, {lambda})"));
    }
    let half = 0.5 * theta;
    Ok(if sigma == lambda {
        half.cos()
    } else {
        // -2 sigma sin(theta/2)
        -f64::from(sigma.twice()) * half.sin()
    })
}

/// Small Wigner matrix `d^1_{sigma_g lambda_g}(theta)`, full 3x3.
pub fn wigner_d_one(sigma_g: i32, lambda_g: i32, theta: f64) -> Result<f64> {
    if !(-1..=1).contains(&sigma_g) || !(-1..=1).contains(&lambda_g) {
        return domain(format!("spin-1 labels must be in {{-1, 0, 1}}, got ({sigma_g}, {lambda_g})"));
    }
    let (s, c) = theta.sin_cos();
    Ok(match (sigma_g, lambda_g) {
        (0, 0) => c,
        (0, l) => f64::from(l) * s * FRAC_1_SQRT_2,
        (sg, 0) => -f64::from(sg) * s * FRAC_1_SQRT_2,
        (sg, l) => 0.5 * (1.0 + f64::from(sg * l) * c),
    })
}
