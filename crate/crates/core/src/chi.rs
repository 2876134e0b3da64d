//! The functional-equation factor `χ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s)`, its
//! logarithmic derivative `ω = χ'/χ`, and the Riemann–Siegel theta function.
//!
//! `ω` is evaluated as `ln 2π - ψ(s) + (π/2) tan(πs/2)`, which follows from
//! the symmetric form `χ(s) = π^{s-1/2} Γ((1-s)/2)/Γ(s/2)` and the digamma
//! reflection formula.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gamma::{ln_gamma, polygamma};
use crate::zeta::ComplexPoint;
use crate::{Error, Result};

/// Highest derivative order of `ω` available.
pub const MAX_OMEGA_ORDER: usize = 12;

/// Minimum distance from the real integers `-1, 0, 1` at which `ω` is
/// evaluated.
pub const OMEGA_POLE_GUARD: f64 = 1e-3;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `ln sin z` on some branch, or `None` where `sin z = 0`.
///
/// Written through `q = e^{±2iz}` so that large `|Im z|` neither overflows
/// nor loses the phase.
fn ln_sin(z: Complex64) -> Option<Complex64> {
    let half = 0.5f64.ln();
    if z.im > 0.0 {
        let q = (2.0 * I * z).exp();
        let one_minus = 1.0 - q;
        (one_minus != Complex64::new(0.0, 0.0))
            .then(|| -I * z + half + I * (PI / 2.0) + one_minus.ln())
    } else if z.im < 0.0 {
        let q = (-2.0 * I * z).exp();
        let one_minus = 1.0 - q;
        (one_minus != Complex64::new(0.0, 0.0))
            .then(|| I * z + half - I * (PI / 2.0) + one_minus.ln())
    } else {
        let v = z.re.sin();
        (v != 0.0).then(|| Complex64::new(v, 0.0).ln())
    }
}

/// `tan z` and `sec² z`, stable for large `|Im z|`.
fn tan_sec2(z: Complex64) -> (Complex64, Complex64) {
    if z.im >= 0.0 {
        let q = (2.0 * I * z).exp();
        let d = 1.0 + q;
        (I * (1.0 - q) / d, 4.0 * q / (d * d))
    } else {
        let q = (-2.0 * I * z).exp();
        let d = 1.0 + q;
        (-I * (1.0 - q) / d, 4.0 * q / (d * d))
    }
}

/// `χ(s)`, evaluated in the log domain.
pub fn chi(p: ComplexPoint) -> Result<Complex64> {
    p.check_strip("chi")?;
    let s = p.s();
    let Some(ls) = ln_sin(s * (PI / 2.0)) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    if (s - 1.0).norm() == 0.0 {
        return Err(Error::PoleProximity {
            what: "chi",
            re: s.re,
            im: s.im,
            distance: 0.0,
        });
    }
    let log = s * 2f64.ln() + (s - 1.0) * PI.ln() + ls + ln_gamma(1.0 - s);
    Ok(log.exp())
}

/// Main term of the Stirling approximation to `χ(1-s)`:
/// `e^{-πi/4} (t/2π)^{σ-1/2} exp(it ln(t/2πe))`.
pub fn chi_one_minus_s_stirling(p: ComplexPoint) -> Result<Complex64> {
    p.check_strip("chi_one_minus_s_stirling")?;
    if !(p.t >= 1.0) {
        return Err(Error::domain(
            "chi_one_minus_s_stirling",
            format!("t = {} is below 1", p.t),
        ));
    }
    let x = p.t / (2.0 * PI);
    let log = Complex64::new((p.sigma - 0.5) * x.ln(), p.t * (x.ln() - 1.0) - PI / 4.0);
    Ok(log.exp())
}

/// Riemann–Siegel theta `θ(t) = Im ln Γ(1/4 + it/2) - (t/2) ln π`, continuous
/// in `t` because `ln Γ` is taken on its analytic branch.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// `χ(1/2 + it)^{-1/2} = e^{iθ(t)}` on the continuous branch.
pub fn chi_inv_sqrt_on_line(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, riemann_siegel_theta(t))
}

/// `[ω(s), ω'(s), …, ω^(m)(s)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaJet {
    pub s: ComplexPoint,
    pub values: Vec<Complex64>,
}

impl OmegaJet {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }
}

// Coefficients of p_r in tan^(r) = sec² · p_r(tan), r ≥ 1.
fn tan_derivative_polys(m: usize) -> Vec<Vec<f64>> {
    let mut polys = vec![vec![], vec![1.0]];
    for r in 1..m {
        let p = &polys[r];
        let mut next = vec![0.0; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            // 2T·p
            next[i + 1] += 2.0 * c;
            // (1 + T²)·p'
            if i > 0 {
                next[i - 1] += i as f64 * c;
                next[i + 1] += i as f64 * c;
            }
        }
        polys.push(next);
    }
    polys
}

/// `ω` and its first `m` derivatives at `s`.
pub fn omega_jet(p: ComplexPoint, m: usize) -> Result<OmegaJet> {
    p.check_strip("omega_jet")?;
    if m > MAX_OMEGA_ORDER {
        return Err(Error::domain(
            "omega_jet",
            format!("order {m} exceeds {MAX_OMEGA_ORDER}"),
        ));
    }
    let s = p.s();
    for pole in [-1.0, 0.0, 1.0] {
        let distance = (s - pole).norm();
        if distance < OMEGA_POLE_GUARD {
            return Err(Error::PoleProximity {
                what: "omega_jet",
                re: s.re,
                im: s.im,
                distance,
            });
        }
    }
    let (tan, sec2) = tan_sec2(s * (PI / 2.0));
    let polys = tan_derivative_polys(m);
    let mut values = Vec::with_capacity(m + 1);
    values.push((2.0 * PI).ln() - polygamma(0, s) + (PI / 2.0) * tan);
    let mut scale = PI / 2.0;
    for poly in polys.iter().take(m + 1).skip(1) {
        scale *= PI / 2.0;
        let horner = poly
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * tan + c);
        let r = values.len();
        values.push(-polygamma(r, s) + scale * sec2 * horner);
    }
    Ok(OmegaJet { s: p, values })
}
