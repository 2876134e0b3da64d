//! Stieltjes constants `c_n`, defined by
//! `ζ(s) = 1/(s-1) + Σ_n (-1)^n c_n/n! · (s-1)^n`.
//!
//! The primary route is the limit
//! `c_n = lim_m [Σ_{l≤m} (ln l)^n/l - (ln m)^{n+1}/(n+1)]`, accelerated with
//! Euler–Maclaurin corrections for `f(x) = (ln x)^n/x` at a small cut-off
//! `m`. The subtraction cancels several digits for large `n`, so this route
//! runs in 256-bit binary floating point. The cross-check fits the Laurent
//! coefficients of `ζ(s) - 1/(s-1)` on a ring around `s = 1` from
//! [`crate::zeta::zeta_deriv`] values.

use std::sync::OnceLock;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bernoulli::bernoulli_exact;
use crate::gamma::factorial;
use crate::zeta::{zeta_deriv, ComplexPoint, EvalConfig};
use crate::{Error, Result};

/// Highest index held by the shared table.
pub const TABLE_LEN: usize = 21;

/// Indices `n ≤ CROSS_CHECK_MAX` are checked against the Laurent fit when
/// the shared table is built.
pub const CROSS_CHECK_MAX: usize = 10;

/// Largest allowed disagreement between the two routes, measured on the
/// Laurent coefficients `a_n = (-1)^n c_n / n!`.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

const PRECISION: usize = 256;
const CUTOFF: u64 = 20;
const CORRECTIONS: usize = 30;
const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StieltjesMethod {
    LimitFormula,
    LaurentFit,
}

/// Immutable table `c_0 … c_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StieltjesTable {
    values: Vec<f64>,
    method: StieltjesMethod,
}

impl StieltjesTable {
    /// Builds `c_0 … c_{n_max}` from the limit formula and cross-checks the
    /// first `min(n_max, CROSS_CHECK_MAX)` entries against the Laurent fit.
    pub fn build(n_max: usize) -> Result<Self> {
        let values = limit_formula(n_max);
        let table = Self {
            values,
            method: StieltjesMethod::LimitFormula,
        };
        let checked = n_max.min(CROSS_CHECK_MAX);
        let fit = laurent_fit(checked)?;
        for n in 0..=checked {
            let gap = (table.values[n] - fit.values[n]).abs() / factorial(n);
            if gap > CROSS_CHECK_TOL {
                return Err(Error::Accuracy {
                    what: format!("stieltjes({n})"),
                    detail: format!(
                        "limit formula {} vs Laurent fit {} (coefficient gap {gap:e})",
                        table.values[n], fit.values[n]
                    ),
                });
            }
        }
        Ok(table)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn method(&self) -> StieltjesMethod {
        self.method
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }
}

/// Shared table `c_0 … c_20`, built on first use.
pub fn table() -> Result<&'static StieltjesTable> {
    static TABLE: OnceLock<Result<StieltjesTable>> = OnceLock::new();
    TABLE
        .get_or_init(|| StieltjesTable::build(TABLE_LEN - 1))
        .as_ref()
        .map_err(Clone::clone)
}

/// `c_n` from the shared table.
pub fn stieltjes(n: usize) -> Result<f64> {
    table()?.get(n).ok_or_else(|| {
        Error::domain("stieltjes", format!("n = {n} exceeds {}", TABLE_LEN - 1))
    })
}

fn big_from_int(v: &BigInt, cc: &mut Consts) -> BigFloat {
    if let Some(small) = v.to_i64() {
        BigFloat::from_i64(small, PRECISION)
    } else {
        BigFloat::parse(&v.to_string(), Radix::Dec, PRECISION, RM, cc)
    }
}

fn big_to_f64(x: &BigFloat) -> f64 {
    let text = format!("{x}");
    text.parse::<f64>()
        .unwrap_or_else(|_| panic!("BigFloat rendered as unparsable {text:?}"))
}

/// `c_0 … c_{n_max}` by the Euler–Maclaurin accelerated limit formula.
///
/// With `f(x) = (ln x)^n / x` and cut-off `m`,
/// `c_n = Σ_{l≤m} f(l) - (ln m)^{n+1}/(n+1) - f(m)/2 - Σ_r B_{2r}/(2r)! f^{(2r-1)}(m)`.
pub fn limit_formula(n_max: usize) -> Vec<f64> {
    let mut cc = Consts::new().expect("astro-float constants cache");
    let p = PRECISION;
    let m = BigFloat::from_u64(CUTOFF, p);
    let ln_m = m.ln(p, RM, &mut cc);
    let logs: Vec<BigFloat> = (1..=CUTOFF)
        .map(|l| BigFloat::from_u64(l, p).ln(p, RM, &mut cc))
        .collect();
    // B_{2r}/(2r)! as exact rationals turned into BigFloat.
    let weights: Vec<BigFloat> = (1..=CORRECTIONS)
        .map(|r| {
            let b = bernoulli_exact(2 * r);
            let fact: BigInt = (1..=2 * r as u64).map(BigInt::from).product();
            let num = big_from_int(b.numer(), &mut cc);
            let den = big_from_int(&(b.denom() * fact), &mut cc);
            num.div(&den, p, RM)
        })
        .collect();

    (0..=n_max)
        .map(|n| {
            let mut acc = BigFloat::from_i64(0, p);
            for (l, ln_l) in logs.iter().enumerate() {
                let term = ln_l.powi(n, p, RM).div(&BigFloat::from_u64(l as u64 + 1, p), p, RM);
                acc = acc.add(&term, p, RM);
            }
            let integral = ln_m
                .powi(n + 1, p, RM)
                .div(&BigFloat::from_u64(n as u64 + 1, p), p, RM);
            acc = acc.sub(&integral, p, RM);
            let f_m = ln_m.powi(n, p, RM).div(&m, p, RM);
            acc = acc.sub(&f_m.div(&BigFloat::from_i64(2, p), p, RM), p, RM);

            // f^{(q)}(x) = x^{-1-q} P_q(ln x), P_{q+1} = -(1+q) P_q + P_q'.
            let mut poly: Vec<BigInt> = vec![BigInt::zero(); n + 1];
            poly[n] = BigInt::from(1);
            let mut q = 0usize;
            for (r, weight) in weights.iter().enumerate() {
                let target = 2 * (r + 1) - 1;
                while q < target {
                    let mut next: Vec<BigInt> =
                        poly.iter().map(|c| c * -(BigInt::from(q as u64 + 1))).collect();
                    for i in 1..poly.len() {
                        next[i - 1] += &poly[i] * BigInt::from(i as u64);
                    }
                    poly = next;
                    q += 1;
                }
                let mut value = BigFloat::from_i64(0, p);
                for coeff in poly.iter().rev() {
                    value = value.mul(&ln_m, p, RM).add(&big_from_int(coeff, &mut cc), p, RM);
                }
                let scale = m.powi(q + 1, p, RM);
                value = value.div(&scale, p, RM);
                acc = acc.sub(&weight.mul(&value, p, RM), p, RM);
            }
            big_to_f64(&acc)
        })
        .collect()
}

/// Stieltjes constants recovered from the Taylor coefficients of the entire
/// function `ζ(s) - 1/(s-1)` sampled on the circle `|s - 1| = 0.9`.
///
/// With equispaced samples the least-squares fit of a truncated power series
/// reduces to a discrete Fourier transform.
pub fn laurent_fit(n_max: usize) -> Result<StieltjesTable> {
    const POINTS: usize = 96;
    const RADIUS: f64 = 0.9;
    let cfg = EvalConfig::default();
    let mut samples = Vec::with_capacity(POINTS);
    for i in 0..POINTS {
        let angle = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / POINTS as f64;
        let w = Complex64::from_polar(RADIUS, angle);
        let z = zeta_deriv(ComplexPoint::from(w + 1.0), 0, &cfg)?;
        samples.push((w, z - w.inv()));
    }
    let values = (0..=n_max)
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, f) in &samples {
                acc += f * w.powi(-(n as i32));
            }
            let a_n = (acc / POINTS as f64).re;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * a_n * factorial(n)
        })
        .collect();
    Ok(StieltjesTable {
        values,
        method: StieltjesMethod::LaurentFit,
    })
}
