//! Zeros of `Z^(k)`, measured discrete and continuous moments, and the Hall
//! polynomial prediction of `∫_0^T Z^(j)(t)² dt`.
//!
//! Work is split over disjoint `t`-panels with rayon. Every parallel stage
//! collects its results in ascending `t` before a sequential compensated sum,
//! so results do not depend on the number of worker threads.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::{breakdown, Mode};
use crate::hardy::{z_deriv_detailed, z_deriv_unchecked, Z_DERIV_T_MIN};
use crate::quad::{gauss16, gauss64};
use crate::stieltjes;
use crate::summation::CompensatedSum;
use crate::{Error, Result, J_MAX, T_MAX};

pub const DEFAULT_DENSITY: usize = 6;
pub const MIN_DENSITY: usize = 4;
pub const DEFAULT_BRACKET_TOL: f64 = 1e-9;
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const MAX_DOUBLINGS: usize = 3;

/// Mean spacing `2π / ln(t/2π)` of zeros near height `t`, floored at `2π`.
pub fn local_gap(t: f64) -> f64 {
    2.0 * PI / (t / (2.0 * PI)).ln().max(1.0)
}

/// `(T/2π) ln(T/2π) - T/2π`.
pub fn expected_count(t_big: f64) -> f64 {
    let x = t_big / (2.0 * PI);
    x * x.ln() - x
}

/// `10 + 2 ln T`.
pub fn census_bound(t_big: f64) -> f64 {
    10.0 + 2.0 * t_big.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub gamma: f64,
    pub bracket_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub k: usize,
    pub t_lo: f64,
    pub t_hi: f64,
    pub zeros: Vec<Zero>,
    pub scan_density: usize,
}

impl ZeroList {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn gammas(&self) -> impl Iterator<Item = f64> + '_ {
        self.zeros.iter().map(|z| z.gamma)
    }

    /// Zeros in `(lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.gammas().filter(|&g| g > lo && g <= hi).count()
    }
}

fn check_order(what: &'static str, j: usize) -> Result<()> {
    if j > J_MAX {
        return Err(Error::domain(what, format!("order {j} exceeds {J_MAX}")));
    }
    Ok(())
}

fn check_interval(what: &'static str, lo: f64, hi: f64) -> Result<()> {
    if !(lo >= Z_DERIV_T_MIN && lo < hi && hi <= T_MAX) {
        return Err(Error::domain(
            what,
            format!("interval [{lo}, {hi}] not inside [{Z_DERIV_T_MIN}, {T_MAX}]"),
        ));
    }
    Ok(())
}

fn z_value(t: f64, k: usize) -> Result<f64> {
    Ok(z_deriv_detailed(t, k)?.value)
}

fn bisect(k: usize, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> Result<Zero> {
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = z_value(m, k)?;
        if fm == 0.0 {
            return Ok(Zero {
                gamma: m,
                bracket_width: 0.0,
            });
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(Zero {
        gamma: 0.5 * (a + b),
        bracket_width: b - a,
    })
}

/// Scans `Z^(k)` on `[t_lo, t_hi]` with `density` points per local gap,
/// brackets sign changes and bisects each bracket to `bracket_tol`.
pub fn find_zeros_with(
    k: usize,
    t_lo: f64,
    t_hi: f64,
    density: usize,
    bracket_tol: f64,
) -> Result<ZeroList> {
    check_order("find_zeros", k)?;
    check_interval("find_zeros", t_lo, t_hi)?;
    if density < MIN_DENSITY {
        return Err(Error::domain(
            "find_zeros",
            format!("density {density} is below {MIN_DENSITY}"),
        ));
    }
    if !(bracket_tol > 0.0) {
        return Err(Error::domain("find_zeros", "bracket tolerance must be positive"));
    }
    let mut grid = vec![t_lo];
    let mut t = t_lo;
    while t < t_hi {
        t = (t + local_gap(t) / density as f64).min(t_hi);
        grid.push(t);
    }
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&t| z_value(t, k))
        .collect::<Result<_>>()?;

    let mut brackets = Vec::new();
    let mut exact = Vec::new();
    for i in 0..grid.len() - 1 {
        let (fa, fb) = (values[i], values[i + 1]);
        if fa == 0.0 {
            if i > 0 {
                exact.push(grid[i]);
            }
            continue;
        }
        if fb != 0.0 && (fa > 0.0) != (fb > 0.0) {
            brackets.push((grid[i], grid[i + 1], fa));
        }
    }
    let mut zeros: Vec<Zero> = brackets
        .par_iter()
        .map(|&(a, b, fa)| bisect(k, a, b, fa, bracket_tol))
        .collect::<Result<_>>()?;
    zeros.extend(exact.into_iter().map(|gamma| Zero {
        gamma,
        bracket_width: 0.0,
    }));
    zeros.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    Ok(ZeroList {
        k,
        t_lo,
        t_hi,
        zeros,
        scan_density: density,
    })
}

pub fn find_zeros(k: usize, t_lo: f64, t_hi: f64, density: usize) -> Result<ZeroList> {
    find_zeros_with(k, t_lo, t_hi, density, DEFAULT_BRACKET_TOL)
}

/// Zeros found in `(0, T]` minus `(T/2π) ln(T/2π) - T/2π`.
pub fn count_check(zl: &ZeroList, t_big: f64) -> Result<f64> {
    if zl.t_lo > Z_DERIV_T_MIN || zl.t_hi < t_big {
        return Err(Error::domain(
            "count_check",
            format!(
                "zero list covers [{}, {}], not (2, {t_big}]",
                zl.t_lo, zl.t_hi
            ),
        ));
    }
    Ok(zl.count_in(0.0, t_big) as f64 - expected_count(t_big))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub zeros: ZeroList,
    pub deviation: f64,
    pub bound: f64,
    pub doublings: usize,
}

/// Zeros of `Z^(k)` on `[2, T]`, rescanning at doubled density (at most
/// [`MAX_DOUBLINGS`] times) while the count deviates by more than
/// `10 + 2 ln T`.
pub fn census(k: usize, t_big: f64, density: usize) -> Result<Census> {
    let bound = census_bound(t_big);
    let mut d = density;
    let mut deviation = f64::NAN;
    for doublings in 0..=MAX_DOUBLINGS {
        let zeros = find_zeros(k, Z_DERIV_T_MIN, t_big, d)?;
        deviation = count_check(&zeros, t_big)?;
        if deviation.abs() <= bound {
            return Ok(Census {
                zeros,
                deviation,
                bound,
                doublings,
            });
        }
        d *= 2;
    }
    Err(Error::Census {
        k,
        t: t_big,
        deviation,
        bound,
    })
}

/// For each gap between consecutive zeros of `outer` inside `(lo, hi)`, the
/// number of zeros of `inner` it contains.
pub fn interlace_counts(outer: &ZeroList, inner: &ZeroList, lo: f64, hi: f64) -> Vec<(f64, f64, usize)> {
    let gs: Vec<f64> = outer.gammas().filter(|&g| g > lo && g < hi).collect();
    gs.windows(2)
        .map(|w| (w[0], w[1], inner.count_in(w[0], w[1])))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMoment {
    pub value: f64,
    pub n_zeros: usize,
    pub max_imag_leak: f64,
}

/// `Σ_γ Z^(j)(γ)²` over the zeros in `zl`, in ascending order.
pub fn discrete_moment_detailed(j: usize, zl: &ZeroList) -> Result<DiscreteMoment> {
    check_order("discrete_moment", j)?;
    let samples: Vec<(f64, f64)> = zl
        .zeros
        .par_iter()
        .map(|z| z_deriv_detailed(z.gamma, j).map(|d| (d.value, d.imag)))
        .collect::<Result<_>>()?;
    let mut acc = CompensatedSum::new();
    let mut leak = 0.0f64;
    for (v, im) in &samples {
        acc.add(v * v);
        leak = leak.max(im.abs() / (1.0 + v.abs()));
    }
    Ok(DiscreteMoment {
        value: acc.value(),
        n_zeros: samples.len(),
        max_imag_leak: leak,
    })
}

pub fn discrete_moment(j: usize, zl: &ZeroList) -> Result<f64> {
    Ok(discrete_moment_detailed(j, zl)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousMoment {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
    pub max_imag_leak: f64,
}

struct PanelResult {
    value: f64,
    error: f64,
    leak: f64,
}

fn squared_samples(j: usize, a: f64, b: f64, rule: &crate::quad::GaussLegendre) -> Result<(Vec<f64>, f64)> {
    let mut leak = 0.0f64;
    let mut out = Vec::with_capacity(rule.nodes.len());
    for t in rule.points(a, b) {
        let d = z_deriv_unchecked(t, j)?;
        leak = leak.max(d.imag.abs() / (1.0 + d.value.abs()));
        out.push(d.value * d.value);
    }
    Ok((out, leak))
}

fn adaptive_panel(j: usize, a: f64, b: f64, whole: f64, depth: usize, tol: f64) -> Result<PanelResult> {
    const MAX_DEPTH: usize = 12;
    let rule = gauss16();
    let m = 0.5 * (a + b);
    let (left_samples, leak_l) = squared_samples(j, a, m, rule)?;
    let (right_samples, leak_r) = squared_samples(j, m, b, rule)?;
    let left = rule.combine(a, m, &left_samples);
    let right = rule.combine(m, b, &right_samples);
    let halves = left + right;
    let gap = (whole - halves).abs();
    let leak = leak_l.max(leak_r);
    if gap <= tol * halves.abs() + 1e-13 * (b - a) {
        return Ok(PanelResult {
            value: halves,
            error: gap,
            leak,
        });
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature { a, b });
    }
    let l = adaptive_panel(j, a, m, left, depth + 1, tol)?;
    let r = adaptive_panel(j, m, b, right, depth + 1, tol)?;
    Ok(PanelResult {
        value: l.value + r.value,
        error: l.error + r.error,
        leak: leak.max(l.leak).max(r.leak),
    })
}

/// Panel end points on `[2, T]`, each panel at most half the local gap wide.
fn panel_edges(t_big: f64) -> Vec<f64> {
    let mut edges = vec![Z_DERIV_T_MIN];
    let mut t = Z_DERIV_T_MIN;
    while t < t_big {
        t = (t + 0.5 * local_gap(t)).min(t_big);
        edges.push(t);
    }
    edges
}

/// `∫_0^T Z^(j)(t)² dt`: a fixed 64-point rule on `[0, 2]` plus adaptive
/// composite Gauss–Legendre on `[2, T]`.
pub fn continuous_moment_with(j: usize, t_big: f64, tol: f64) -> Result<ContinuousMoment> {
    check_order("continuous_moment", j)?;
    if !(t_big > Z_DERIV_T_MIN && t_big <= T_MAX) {
        return Err(Error::domain(
            "continuous_moment",
            format!("T = {t_big} not in ({Z_DERIV_T_MIN}, {T_MAX}]"),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("continuous_moment", "tolerance must be positive"));
    }
    let (sliver_samples, sliver_leak) = squared_samples(j, 0.0, Z_DERIV_T_MIN, gauss64())?;
    let sliver = gauss64().combine(0.0, Z_DERIV_T_MIN, &sliver_samples);

    let edges = panel_edges(t_big);
    let panels: Vec<PanelResult> = edges
        .par_windows(2)
        .map(|w| {
            let (samples, _) = squared_samples(j, w[0], w[1], gauss16())?;
            let whole = gauss16().combine(w[0], w[1], &samples);
            adaptive_panel(j, w[0], w[1], whole, 0, tol)
        })
        .collect::<Result<_>>()?;

    let mut acc = CompensatedSum::new();
    acc.add(sliver);
    let mut error = 0.0;
    let mut leak = sliver_leak;
    for p in &panels {
        acc.add(p.value);
        error += p.error;
        leak = leak.max(p.leak);
    }
    Ok(ContinuousMoment {
        value: acc.value(),
        error_estimate: error,
        panels: panels.len(),
        max_imag_leak: leak,
    })
}

pub fn continuous_moment(j: usize, t_big: f64) -> Result<f64> {
    Ok(continuous_moment_with(j, t_big, DEFAULT_QUAD_TOL)?.value)
}

fn factorial_ratio(g: usize, m: usize) -> f64 {
    // g!/m! for m ≤ g
    ((m + 1)..=g).fold(1.0, |acc, i| acc * i as f64)
}

/// `W_g(v) = Σ_i (-1)^i g!/(g-i)! v^{g-i}`, the closed form of
/// `e^{-v} ∫_0^{e^v} (ln u)^g du`.
pub fn hall_w(g: usize, v: f64) -> f64 {
    let mut acc = 0.0;
    for m in (0..=g).rev() {
        let sign = if (g - m) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * factorial_ratio(g, m) * v.powi(m as i32);
    }
    acc
}

fn hall_w_coeffs(g: usize) -> Vec<f64> {
    (0..=g)
        .map(|m| {
            let sign = if (g - m) % 2 == 0 { 1.0 } else { -1.0 };
            sign * factorial_ratio(g, m)
        })
        .collect()
}

/// `P_{2j+1} = W_{2j+1} + (4j+2) Σ_{n≤2j} C(2j,n) (-2)^n c_n W_{2j-n}` in the
/// monomial basis, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HallPolynomial {
    pub j: usize,
    pub coefficients: Vec<f64>,
}

impl HallPolynomial {
    pub fn new(j: usize) -> Result<Self> {
        check_order("HallPolynomial", j)?;
        let c = stieltjes::table()?.values();
        let deg = 2 * j + 1;
        let mut coefficients = hall_w_coeffs(deg);
        let mut binom = 1.0;
        for n in 0..=2 * j {
            if n > 0 {
                binom = binom * (2 * j + 1 - n) as f64 / n as f64;
            }
            let w = hall_w_coeffs(2 * j - n);
            let scale = (4 * j + 2) as f64 * binom * (-2.0f64).powi(n as i32) * c[n];
            for (m, wc) in w.iter().enumerate() {
                coefficients[m] += scale * wc;
            }
        }
        Ok(Self { j, coefficients })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// `T P_{2j+1}(ln(T/2π)) / (4^j (2j+1))`.
pub fn hall_prediction(j: usize, t_big: f64) -> Result<f64> {
    if !(t_big >= 10.0) || !t_big.is_finite() {
        return Err(Error::domain("hall_prediction", format!("T = {t_big} must be at least 10")));
    }
    let p = HallPolynomial::new(j)?;
    let l = (t_big / (2.0 * PI)).ln();
    Ok(t_big * p.eval(l) / (4f64.powi(j as i32) * (2 * j + 1) as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentDiagnostics {
    pub max_imag_leak: f64,
    pub quadrature_error: f64,
    pub census_deviation: f64,
    pub scan_density: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub j: usize,
    pub k: usize,
    #[serde(rename = "T")]
    pub t_big: f64,
    pub measured: f64,
    pub predicted: f64,
    pub ratio: f64,
    pub n_zeros_used: usize,
    pub count_expected: f64,
    pub diagnostics: MomentDiagnostics,
}

fn ratio(measured: f64, predicted: f64) -> f64 {
    if predicted != 0.0 {
        measured / predicted
    } else {
        f64::NAN
    }
}

/// Measured `Σ_{0<γ_k≤T} Z^(j)(γ_k)²` against the finite-`T` main term.
pub fn verify(j: usize, k: usize, t_big: f64, density: usize) -> Result<MomentReport> {
    check_order("verify", j)?;
    let predicted = breakdown(j, k, t_big, Mode::Finite)?.total;
    let c = census(k, t_big, density)?;
    let m = discrete_moment_detailed(j, &c.zeros)?;
    Ok(MomentReport {
        j,
        k,
        t_big,
        measured: m.value,
        predicted,
        ratio: ratio(m.value, predicted),
        n_zeros_used: m.n_zeros,
        count_expected: expected_count(t_big),
        diagnostics: MomentDiagnostics {
            max_imag_leak: m.max_imag_leak,
            quadrature_error: 0.0,
            census_deviation: c.deviation,
            scan_density: c.zeros.scan_density,
        },
    })
}

/// Measured `∫_0^T Z^(j)(t)² dt` against the Hall prediction.
pub fn continuous_report(j: usize, t_big: f64, tol: f64) -> Result<MomentReport> {
    let predicted = hall_prediction(j, t_big)?;
    let m = continuous_moment_with(j, t_big, tol)?;
    Ok(MomentReport {
        j,
        k: j,
        t_big,
        measured: m.value,
        predicted,
        ratio: ratio(m.value, predicted),
        n_zeros_used: 0,
        count_expected: expected_count(t_big),
        diagnostics: MomentDiagnostics {
            max_imag_leak: m.max_imag_leak,
            quadrature_error: m.error_estimate,
            census_deviation: 0.0,
            scan_density: 0,
        },
    })
}
