//! `ζ^(μ)(s)` in the strip `-1 < σ < 2` by a differentiated Euler–Maclaurin
//! expansion.
//!
//! With `N` Dirichlet terms and `R` Bernoulli corrections,
//!
//! ```text
//! ζ(s) = Σ_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
//!        + Σ_{r=1}^{R} B_{2r}/(2r)! · s(s+1)…(s+2r-2) · N^{-s-2r+1} + E
//! ```
//!
//! Every piece is expanded as a truncated Taylor series in `h` around `s`, so
//! one pass yields the whole jet `ζ(s), ζ'(s), …, ζ^(m)(s)`. The Dirichlet part
//! contributes `(-ln n)^μ n^{-s}` and the tail pieces are differentiated
//! analytically.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bernoulli::bernoulli;
use crate::gamma::factorial;
use crate::{Error, Result, T_MAX};

/// Highest derivative order of `ζ` the jet evaluator produces.
pub const MAX_ZETA_ORDER: usize = 13;

/// Highest order accepted by [`zeta_deriv`].
pub const MAX_PUBLIC_ORDER: usize = 12;

/// `|s - 1|` below which the Euler–Maclaurin path refuses to evaluate.
pub const POLE_GUARD: f64 = 1e-6;

/// A point `s = σ + it`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Self {
        Self { sigma, t }
    }

    /// The point `1/2 + it` on the critical line.
    pub fn on_line(t: f64) -> Self {
        Self::new(0.5, t)
    }

    pub fn s(&self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    /// `1 - s`.
    pub fn reflect(&self) -> Self {
        Self::new(1.0 - self.sigma, -self.t)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.sigma, -self.t)
    }

    /// Checks `-1 < σ ≤ 2`, `t` finite and `|t| ≤ T_MAX`.
    pub fn check_strip(&self, what: &'static str) -> Result<()> {
        if !(self.sigma > -1.0 && self.sigma <= 2.0) {
            return Err(Error::domain(
                what,
                format!("sigma = {} not in (-1, 2]", self.sigma),
            ));
        }
        if !self.t.is_finite() || self.t.abs() > T_MAX {
            return Err(Error::domain(
                what,
                format!("|t| = {} exceeds {T_MAX}", self.t.abs()),
            ));
        }
        Ok(())
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(s: Complex64) -> Self {
        Self::new(s.re, s.im)
    }
}

/// Truncation controls for the Euler–Maclaurin evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Target absolute truncation error, relative to `max(1, |ζ^(μ)(s)|)`.
    pub target_abs_tol: f64,
    /// Hard cap on the number of Dirichlet terms.
    pub max_em_terms: usize,
    /// Order of the last Bernoulli number used (`B_2 … B_order`).
    pub bernoulli_order: usize,
    /// Evaluate through the Laurent expansion when `|s - 1| < POLE_GUARD`
    /// instead of failing.
    pub laurent_near_pole: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            target_abs_tol: 1e-12,
            max_em_terms: 200_000,
            bernoulli_order: 24,
            laurent_near_pole: false,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_tol > 0.0) {
            return Err(Error::domain("EvalConfig", "target_abs_tol must be positive"));
        }
        if self.bernoulli_order < 4 || self.bernoulli_order % 2 != 0 || self.bernoulli_order > 80 {
            return Err(Error::domain(
                "EvalConfig",
                format!("bernoulli_order = {} must be even in [4, 80]", self.bernoulli_order),
            ));
        }
        if self.max_em_terms < 2 {
            return Err(Error::domain("EvalConfig", "max_em_terms must be at least 2"));
        }
        Ok(())
    }

    /// Number of Dirichlet terms used at `s` for a jet of the given order.
    ///
    /// The Bernoulli corrections shrink like `(|s + 2r|/(2πN))^{2r}`; `N` is
    /// picked so that this ratio raised to the correction count meets the
    /// tolerance.
    pub fn em_terms(&self, s: Complex64, order: usize) -> usize {
        let corrections = self.bernoulli_order as f64;
        let ratio = self.target_abs_tol.powf(1.0 / corrections).clamp(0.05, 0.35);
        let reach = s.norm() + corrections + order as f64 + 1.0;
        let n = (reach / (2.0 * std::f64::consts::PI * ratio)).ceil() as usize;
        n.clamp(30, self.max_em_terms)
    }
}

const LN_TABLE_LEN: usize = 60_000;

fn ln_int(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| (0..LN_TABLE_LEN).map(|k| (k.max(1) as f64).ln()).collect());
    if n < LN_TABLE_LEN {
        table[n]
    } else {
        (n as f64).ln()
    }
}

// Truncated power series in h, all of length `len`.
fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let len = a.len();
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().take(len - i).enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

// Multiplies a series by (c + h) in place.
fn series_mul_linear(a: &mut [Complex64], c: Complex64) {
    for i in (0..a.len()).rev() {
        let lower = if i > 0 { a[i - 1] } else { Complex64::new(0.0, 0.0) };
        a[i] = a[i] * c + lower;
    }
}

/// `[ζ(s), ζ'(s), …, ζ^(order)(s)]`.
pub fn zeta_jet(p: ComplexPoint, order: usize, cfg: &EvalConfig) -> Result<Vec<Complex64>> {
    p.check_strip("zeta")?;
    cfg.validate()?;
    if order > MAX_ZETA_ORDER {
        return Err(Error::domain(
            "zeta",
            format!("derivative order {order} exceeds {MAX_ZETA_ORDER}"),
        ));
    }
    let s = p.s();
    let distance = (s - 1.0).norm();
    if distance < POLE_GUARD {
        if cfg.laurent_near_pole {
            return laurent_jet(s, order);
        }
        return Err(Error::PoleProximity {
            what: "zeta",
            re: s.re,
            im: s.im,
            distance,
        });
    }
    Ok(em_jet(s, order, cfg))
}

/// `ζ^(μ)(s)`.
pub fn zeta_deriv(p: ComplexPoint, mu: usize, cfg: &EvalConfig) -> Result<Complex64> {
    if mu > MAX_PUBLIC_ORDER {
        return Err(Error::domain(
            "zeta_deriv",
            format!("mu = {mu} exceeds {MAX_PUBLIC_ORDER}"),
        ));
    }
    Ok(zeta_jet(p, mu, cfg)?[mu])
}

/// `ζ(s)` with the default configuration.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    zeta_deriv(s.into(), 0, &EvalConfig::default())
}

fn em_jet(s: Complex64, order: usize, cfg: &EvalConfig) -> Vec<Complex64> {
    let len = order + 1;
    let n_terms = cfg.em_terms(s, order);
    let zero = Complex64::new(0.0, 0.0);

    // Dirichlet part, accumulated directly as derivative values.
    let mut derivs = vec![zero; len];
    for n in 1..n_terms {
        let ln = ln_int(n);
        let mut term = (-s * ln).exp();
        for d in derivs.iter_mut() {
            *d += term;
            term *= -ln;
        }
    }

    // Tail pieces as Taylor coefficients in h.
    let big_n = n_terms as f64;
    let ln_n = ln_int(n_terms);
    let n_pow = (-s * ln_n).exp();
    // N^{-s-h} = N^{-s} e^{-h ln N}
    let mut expo = vec![zero; len];
    let mut c = n_pow;
    for (m, e) in expo.iter_mut().enumerate() {
        *e = c;
        c *= -ln_n / (m + 1) as f64;
    }

    // N^{1-s-h}/(s-1+h)
    let inv = (s - 1.0).inv();
    let mut pole = vec![zero; len];
    let mut c = inv;
    for p in pole.iter_mut() {
        *p = c;
        c *= -inv;
    }
    let mut coeffs: Vec<Complex64> = series_mul(&expo, &pole).iter().map(|z| z * big_n).collect();

    // N^{-s-h}/2
    for (acc, e) in coeffs.iter_mut().zip(&expo) {
        *acc += 0.5 * e;
    }

    // B_{2r}/(2r)! (s+h)(s+1+h)…(s+2r-2+h) N^{-s-h-2r+1}; the rising factorial
    // is kept divided by N^{2r-1} to stay in range.
    let mut rising = vec![zero; len];
    rising[0] = Complex64::new(1.0, 0.0);
    series_mul_linear(&mut rising, s);
    for x in rising.iter_mut() {
        *x /= big_n;
    }
    let mut fact = 2.0;
    for r in 1..=cfg.bernoulli_order / 2 {
        let k = 2 * r;
        if r > 1 {
            series_mul_linear(&mut rising, s + (k - 3) as f64);
            series_mul_linear(&mut rising, s + (k - 2) as f64);
            for x in rising.iter_mut() {
                *x /= big_n * big_n;
            }
            fact *= ((k - 1) * k) as f64;
        }
        let weight = bernoulli(k) / fact;
        let term = series_mul(&rising, &expo);
        for (acc, t) in coeffs.iter_mut().zip(&term) {
            *acc += weight * t;
        }
    }

    for (m, (d, c)) in derivs.iter_mut().zip(&coeffs).enumerate() {
        *d += c * factorial(m);
    }
    derivs
}

// ζ^(μ)(s) = (-1)^μ μ!/(s-1)^{μ+1} + Σ_{n≥μ} n!/(n-μ)! · a_n (s-1)^{n-μ},
// a_n = (-1)^n c_n / n!.
fn laurent_jet(s: Complex64, order: usize) -> Result<Vec<Complex64>> {
    let table = crate::stieltjes::table()?;
    let w = s - 1.0;
    let coeffs: Vec<f64> = table
        .values()
        .iter()
        .enumerate()
        .map(|(n, c)| if n % 2 == 0 { *c } else { -*c } / factorial(n))
        .collect();
    let mut out = Vec::with_capacity(order + 1);
    for mu in 0..=order {
        let sign = if mu % 2 == 0 { 1.0 } else { -1.0 };
        let mut v = sign * factorial(mu) * w.powi(-(mu as i32) - 1);
        for (n, a) in coeffs.iter().enumerate().skip(mu) {
            v += a * factorial(n) / factorial(n - mu) * w.powi((n - mu) as i32);
        }
        out.push(v);
    }
    Ok(out)
}
