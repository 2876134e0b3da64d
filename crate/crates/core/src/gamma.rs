//! Complex log-gamma and polygamma functions.
//!
//! Both use the same scheme: shift the argument up by an integer until the
//! Stirling-type asymptotic series is accurate, then undo the shift with the
//! recurrence `Γ(z+1) = zΓ(z)`. For `Re z > 0` the result of [`ln_gamma`] is
//! the analytic branch (continuous in `z`), not `ln` of the principal value
//! of `Γ`, which is what the Riemann–Siegel theta needs.

use num_complex::Complex64;

use crate::bernoulli::bernoulli;

const SHIFT_RADIUS: f64 = 15.0;
const SERIES_TERMS: usize = 12;

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

fn shift_for(z: Complex64) -> usize {
    if z.im.abs() >= SHIFT_RADIUS && z.re >= -5.0 {
        0
    } else {
        (SHIFT_RADIUS - z.re).ceil().max(0.0) as usize
    }
}

/// `ln Γ(z)` on the analytic branch. Undefined at non-positive integers.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let shift = shift_for(z);
    let mut correction = Complex64::new(0.0, 0.0);
    for i in 0..shift {
        correction += (z + i as f64).ln();
    }
    let w = z + shift as f64;
    let half_ln_two_pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    let mut series = (w - 0.5) * w.ln() - w + half_ln_two_pi;
    let w2 = w * w;
    let mut wpow = w;
    for k in 1..=SERIES_TERMS {
        let kk = 2 * k;
        series += bernoulli(kk) / ((kk * (kk - 1)) as f64 * wpow);
        wpow *= w2;
    }
    series - correction
}

/// Digamma `ψ(z) = Γ'(z)/Γ(z)`.
pub fn digamma(z: Complex64) -> Complex64 {
    polygamma(0, z)
}

/// Polygamma `ψ^(r)(z)`, the `r`-th derivative of the digamma function.
pub fn polygamma(r: usize, z: Complex64) -> Complex64 {
    let shift = shift_for(z);
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let r_fact = factorial(r);

    // ψ^(r)(z) = ψ^(r)(z+1) - (-1)^r r! / z^{r+1}
    let mut correction = Complex64::new(0.0, 0.0);
    for i in 0..shift {
        correction += (z + i as f64).powi(-(r as i32) - 1);
    }
    correction *= sign * r_fact;

    let w = z + shift as f64;
    let inv = w.inv();
    let inv2 = inv * inv;
    let asymptotic = if r == 0 {
        let mut acc = w.ln() - 0.5 * inv;
        let mut p = inv2;
        for k in 1..=SERIES_TERMS {
            let kk = 2 * k;
            acc -= bernoulli(kk) / kk as f64 * p;
            p *= inv2;
        }
        acc
    } else {
        // (-1)^{r+1} [ (r-1)!/w^r + r!/(2 w^{r+1}) + Σ B_2k (2k+r-1)!/((2k)! w^{2k+r}) ]
        let inv_r = inv.powi(r as i32);
        let mut acc = factorial(r - 1) * inv_r + 0.5 * r_fact * inv_r * inv;
        let mut p = inv_r * inv2;
        // (2k+r-1)!/(2k)! built incrementally.
        let mut ratio = factorial(r + 1) / 2.0;
        for k in 1..=SERIES_TERMS {
            let kk = 2 * k;
            acc += bernoulli(kk) * ratio * p;
            p *= inv2;
            let next = kk + 2;
            ratio *= ((next + r - 2) * (next + r - 1)) as f64 / ((next - 1) * next) as f64;
        }
        -sign * acc
    };
    asymptotic - correction
}
