//! Bessel functions of the first kind, integer order.

/// Below this argument the ascending series is used, above it Miller's
/// backward recurrence.
const SERIES_LIMIT: f64 = 12.0;

/// `J_n(x)` for integer `n` and real `x`.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let mut sign = 1.0;
    if n < 0 && n % 2 != 0 {
        sign = -sign;
    }
    if x < 0.0 && n % 2 != 0 {
        sign = -sign;
    }
    let n = n.unsigned_abs() as usize;
    let x = x.abs();
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if !x.is_finite() {
        return f64::NAN;
    }
    let v = if x < SERIES_LIMIT { series(n, x) } else { miller(n, x)[n] };
    sign * v
}

/// `J_0(x) ..= J_nmax(x)` in one sweep, for `x >= 0`.
pub fn bessel_j_upto(nmax: usize, x: f64) -> Vec<f64> {
    let x = x.abs();
    if x == 0.0 {
        let mut v = vec![0.0; nmax + 1];
        v[0] = 1.0;
        return v;
    }
    if x < SERIES_LIMIT {
        return (0..=nmax).map(|n| series(n, x)).collect();
    }
    let mut v = miller(nmax, x);
    v.truncate(nmax + 1);
    v
}

fn series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut sum = term;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if (term.abs() <= 1e-17 * sum.abs() && k as f64 > half) || k > 400 {
            break;
        }
    }
    sum
}

/// Normalized backward recurrence; returns `J_0..=J_top` with `top >= n`.
fn miller(n: usize, x: f64) -> Vec<f64> {
    let big = (n as f64).max(x);
    let mut top = (big + 20.0 + 12.0 * big.cbrt()).ceil() as usize;
    top += top % 2;
    let mut j = vec![0.0; top + 2];
    j[top] = 1e-280;
    let mut norm = 2.0 * j[top];
    for k in (1..=top).rev() {
        j[k - 1] = 2.0 * k as f64 / x * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in j[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
            norm *= 1e-250;
        }
        if k - 1 > 0 && (k - 1) % 2 == 0 {
            norm += 2.0 * j[k - 1];
        }
    }
    norm += j[0];
    for v in j.iter_mut() {
        *v /= norm;
    }
    j
}
