//! `f_k`, `Z_k`, the real derivatives `Z^(j)(t)` and the operator polynomial
//! `𝒵_k(s, T) = (L/2 + d/ds)^k ζ(s)`.
//!
//! `f_0 = 1` and `f_r = f'_{r-1} - ω f_{r-1}/2`. Each `f_r` is a polynomial in
//! `ω, ω', …, ω^(r-1)`; the polynomials are generated once with exact rational
//! coefficients and then evaluated on an [`OmegaJet`](crate::chi::OmegaJet).
//! `Z_k` follows from the binomial form `Z_k = Σ_μ C(k,μ) f_{k-μ} ζ^(μ)`, and on
//! the critical line `Z^(j)(t) = i^j e^{iθ(t)} Z_j(1/2 + it)`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chi::{chi, chi_inv_sqrt_on_line, omega_jet};
use crate::zeta::{zeta_jet, ComplexPoint, EvalConfig};
use crate::{Error, Result, J_MAX, T_MAX};

/// Highest `k` accepted by [`fk_jet`], [`zk_value`] and [`z_deriv`].
pub const MAX_K: usize = J_MAX;

/// Highest `k` accepted by [`script_zk`].
pub const MAX_SCRIPT_K: usize = 12;

/// Lower end of the range of `t` accepted by [`z_deriv`].
pub const Z_DERIV_T_MIN: f64 = 2.0;

/// Bound on the discarded imaginary part of `i^j e^{iθ} Z_j`, relative to
/// `1 + |Re|`.
pub const BRANCH_TOL: f64 = 1e-8;

type Monomial = Vec<u32>;

fn exact_fk_polys() -> Vec<BTreeMap<Monomial, BigRational>> {
    let mut polys: Vec<BTreeMap<Monomial, BigRational>> = Vec::with_capacity(MAX_K + 1);
    let mut f0 = BTreeMap::new();
    f0.insert(vec![0; MAX_K], BigRational::one());
    polys.push(f0);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for r in 1..=MAX_K {
        let prev = &polys[r - 1];
        let mut next: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (mono, coeff) in prev {
            // d/ds Π ω_i^{e_i}
            for i in 0..MAX_K - 1 {
                if mono[i] > 0 {
                    let mut m = mono.clone();
                    m[i] -= 1;
                    m[i + 1] += 1;
                    *next.entry(m).or_insert_with(BigRational::zero) +=
                        coeff * BigRational::from_integer(BigInt::from(mono[i]));
                }
            }
            // -ω f/2
            let mut m = mono.clone();
            m[0] += 1;
            *next.entry(m).or_insert_with(BigRational::zero) -= coeff * &half;
        }
        next.retain(|_, c| !c.is_zero());
        polys.push(next);
    }
    polys
}

fn fk_polys() -> &'static [Vec<(Monomial, f64)>] {
    static POLYS: OnceLock<Vec<Vec<(Monomial, f64)>>> = OnceLock::new();
    POLYS.get_or_init(|| {
        exact_fk_polys()
            .into_iter()
            .map(|p| {
                p.into_iter()
                    .map(|(m, c)| (m, c.to_f64().expect("finite rational")))
                    .collect()
            })
            .collect()
    })
}

/// `[f_0(s), …, f_k(s)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FkJet {
    pub s: ComplexPoint,
    pub k: usize,
    pub values: Vec<Complex64>,
}

/// `Z_k(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZkValue {
    pub s: ComplexPoint,
    pub k: usize,
    pub value: Complex64,
}

/// `Z^(j)(t)` with the discarded imaginary part kept as a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZDeriv {
    pub t: f64,
    pub j: usize,
    pub value: f64,
    pub imag: f64,
}

fn check_k(what: &'static str, k: usize, max: usize) -> Result<()> {
    if k > max {
        return Err(Error::domain(what, format!("k = {k} exceeds {max}")));
    }
    Ok(())
}

pub fn fk_jet(p: ComplexPoint, k: usize) -> Result<FkJet> {
    check_k("fk_jet", k, MAX_K)?;
    let omega = omega_jet(p, k)?;
    let polys = fk_polys();
    let values = (0..=k)
        .map(|r| {
            polys[r]
                .iter()
                .map(|(mono, c)| {
                    mono.iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .fold(Complex64::new(*c, 0.0), |acc, (i, &e)| {
                            acc * omega.values[i].powu(e)
                        })
                })
                .sum()
        })
        .collect();
    Ok(FkJet { s: p, k, values })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn zk_value(p: ComplexPoint, k: usize) -> Result<ZkValue> {
    zk_value_with(p, k, &EvalConfig::default())
}

pub fn zk_value_with(p: ComplexPoint, k: usize, cfg: &EvalConfig) -> Result<ZkValue> {
    check_k("zk_value", k, MAX_K)?;
    let zeta = zeta_jet(p, k, cfg)?;
    let value = if k == 0 {
        zeta[0]
    } else {
        let f = fk_jet(p, k)?;
        (0..=k)
            .map(|mu| binomial(k, mu) * f.values[k - mu] * zeta[mu])
            .sum()
    };
    Ok(ZkValue { s: p, k, value })
}

/// `Z^(j)(t)` for `2 ≤ t ≤ T_MAX`.
pub fn z_deriv(t: f64, j: usize) -> Result<f64> {
    Ok(z_deriv_detailed(t, j)?.value)
}

pub fn z_deriv_detailed(t: f64, j: usize) -> Result<ZDeriv> {
    if !(Z_DERIV_T_MIN..=T_MAX).contains(&t) {
        return Err(Error::domain(
            "z_deriv",
            format!("t = {t} not in [{Z_DERIV_T_MIN}, {T_MAX}]"),
        ));
    }
    z_deriv_unchecked(t, j)
}

/// As [`z_deriv_detailed`] but only requires `0 ≤ t ≤ T_MAX`; used for the
/// short stretch `[0, 2]` of the continuous moment.
pub(crate) fn z_deriv_unchecked(t: f64, j: usize) -> Result<ZDeriv> {
    check_k("z_deriv", j, MAX_K)?;
    if !(0.0..=T_MAX).contains(&t) {
        return Err(Error::domain("z_deriv", format!("t = {t} not in [0, {T_MAX}]")));
    }
    let zk = zk_value(ComplexPoint::on_line(t), j)?.value;
    let rot = Complex64::i().powu(j as u32) * chi_inv_sqrt_on_line(t);
    let v = rot * zk;
    if v.im.abs() > BRANCH_TOL * (1.0 + v.re.abs()) {
        return Err(Error::Branch {
            t,
            j,
            re: v.re,
            im: v.im,
        });
    }
    Ok(ZDeriv {
        t,
        j,
        value: v.re,
        imag: v.im,
    })
}

/// `|Z_k(s) - (-1)^k χ(s) Z_k(1-s)| / (1 + |Z_k(s)|)`.
pub fn fe_residual(p: ComplexPoint, k: usize) -> Result<f64> {
    let lhs = zk_value(p, k)?.value;
    let mirror = zk_value(p.reflect(), k)?.value;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = sign * chi(p)? * mirror;
    Ok((lhs - rhs).norm() / (1.0 + lhs.norm()))
}

fn script_l(t_big: f64) -> Result<f64> {
    if !(t_big >= 10.0) || !t_big.is_finite() {
        return Err(Error::domain("script_zk", format!("T = {t_big} must be at least 10")));
    }
    Ok((t_big / (2.0 * std::f64::consts::PI)).ln())
}

fn script_pair(p: ComplexPoint, k: usize, t_big: f64) -> Result<(Complex64, Complex64)> {
    check_k("script_zk", k, MAX_SCRIPT_K)?;
    let half_l = script_l(t_big)? / 2.0;
    let zeta = zeta_jet(p, k + 1, &EvalConfig::default())?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for mu in 0..=k {
        let w = binomial(k, mu) * half_l.powi((k - mu) as i32);
        value += w * zeta[mu];
        deriv += w * zeta[mu + 1];
    }
    Ok((value, deriv))
}

/// `Σ_μ C(k,μ) (L/2)^{k-μ} ζ^(μ)(s)` with `L = ln(T/2π)`.
pub fn script_zk(p: ComplexPoint, k: usize, t_big: f64) -> Result<Complex64> {
    Ok(script_pair(p, k, t_big)?.0)
}

/// `d/ds 𝒵_k(s, T)`.
pub fn script_zk_derivative(p: ComplexPoint, k: usize, t_big: f64) -> Result<Complex64> {
    Ok(script_pair(p, k, t_big)?.1)
}

/// Newton iteration for a zero of `𝒵_k(·, T)` from `seed`.
pub fn refine_script_zk_root(seed: Complex64, k: usize, t_big: f64) -> Result<Complex64> {
    const MAX_ITER: usize = 60;
    let mut z = seed;
    for _ in 0..MAX_ITER {
        let (f, df) = script_pair(z.into(), k, t_big)?;
        let step = f / df;
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) {
            break;
        }
        if step.norm() <= 1e-14 * (1.0 + z.norm()) {
            return Ok(z);
        }
    }
    Err(Error::Convergence {
        what: "refine_script_zk_root",
        iterations: MAX_ITER,
    })
}
