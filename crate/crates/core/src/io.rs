//! CSV serialization with fixed float formatting (9 significant digits).

use std::io::{self, Write};

use crate::evolved::EvolvedCoefficient;
use crate::observables::{MapGrid, PolarizationPoint};
use crate::scalar_oracle::ScalarCoefficient;

/// `x` with 9 significant digits in exponent form; empty for NaN, and
/// `-0` written as `0`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x == 0.0 {
        format!("{:.8e}", 0.0)
    } else {
        format!("{x:.8e}")
    }
}

/// Writes each line of `header` prefixed by `# `.
pub fn write_header<W: Write>(out: &mut W, header: &[String]) -> io::Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

pub const COEFFICIENT_COLUMNS: &str =
    "omega_eV,theta_g_rad,m_prime2,lambda_prime2,m_gamma,lambda_gamma,re_weight,im_weight,branch";

pub fn write_coefficients<W: Write>(out: &mut W, rows: &[EvolvedCoefficient]) -> io::Result<()> {
    writeln!(out, "{COEFFICIENT_COLUMNS}")?;
    for c in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(c.omega),
            c.theta_g.map(fmt_f64).unwrap_or_default(),
            c.m_prime.twice(),
            c.lambda_prime.twice(),
            c.m_gamma,
            c.lambda_gamma,
            fmt_f64(c.weight.re),
            fmt_f64(c.weight.im),
            c.branch.map(|b| b.as_str()).unwrap_or("")
        )?;
    }
    Ok(())
}

pub fn write_curve<W: Write>(out: &mut W, points: &[PolarizationPoint]) -> io::Result<()> {
    writeln!(out, "theta_g_deg,P_l")?;
    for p in points {
        writeln!(out, "{},{}", fmt_f64(p.theta_g.to_degrees()), fmt_f64(p.p_l))?;
    }
    Ok(())
}

pub fn write_map<W: Write>(out: &mut W, grid: &MapGrid) -> io::Result<()> {
    writeln!(out, "theta_deg,theta_g_deg,P_l")?;
    for (i, t) in grid.theta.iter().enumerate() {
        for (j, tg) in grid.theta_g.iter().enumerate() {
            writeln!(out, "{},{},{}", fmt_f64(t.to_degrees()), fmt_f64(tg.to_degrees()), fmt_f64(grid.values[i][j]))?;
        }
    }
    Ok(())
}

pub fn write_scalar<W: Write>(out: &mut W, rows: &[ScalarCoefficient]) -> io::Result<()> {
    writeln!(out, "m,E1_eV,re_weight,im_weight")?;
    for c in rows {
        writeln!(out, "{},{},{},{}", c.m1, fmt_f64(c.e1), fmt_f64(c.weight.re), fmt_f64(c.weight.im))?;
    }
    Ok(())
}
