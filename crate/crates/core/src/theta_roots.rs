//! Roots `θ_g` of the truncated exponential `Σ_{μ≤k} θ^μ/μ!`.
//!
//! Root finding works on the integer polynomial `Σ_μ (k!/μ!) θ^μ`. Power sums
//! `Σ_g θ_g^{-u}` are computed exactly from the coefficients: the reciprocals
//! `1/θ_g` are the roots of the monic `y^k + Σ_{i≥1} y^{k-i}/i!`, so Newton's
//! identities run over rationals.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::gamma::factorial;
use crate::summation::compensated_sum_complex;
use crate::{Error, Result};

pub const MAX_THETA_K: usize = 40;

/// Power sums are always held at least up to this `u`, enough for the main
/// coefficient with `j ≤ 12`.
pub const MIN_POWER_SUMS: usize = 26;

/// Root-side and coefficient-side power sums must agree to this tolerance,
/// relative to `Σ_g |θ_g|^{-u}`.
pub const POWER_SUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct ThetaSystem {
    k: usize,
    roots: Vec<Complex64>,
    residuals: Vec<f64>,
    /// `power_sums[u-1] = Σ_g θ_g^{-u}` from the exact recursion.
    power_sums: Vec<f64>,
    exp_factors: Vec<Complex64>,
    #[serde(skip)]
    exact_power_sums: Vec<BigRational>,
    #[serde(skip)]
    root_power_sums: Vec<Complex64>,
}

impl ThetaSystem {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Roots sorted by `(Re, Im)`.
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// `|Σ_{μ≤k} θ_g^μ/μ!|` per root.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// `e^{-2θ_g}` per root.
    pub fn exp_factors(&self) -> &[Complex64] {
        &self.exp_factors
    }

    /// Largest `u` for which power sums are held.
    pub fn u_max(&self) -> usize {
        self.power_sums.len()
    }

    pub fn power_sums(&self) -> &[f64] {
        &self.power_sums
    }

    pub fn power_sum_exact(&self, u: usize) -> Option<&BigRational> {
        u.checked_sub(1).and_then(|i| self.exact_power_sums.get(i))
    }

    /// `Σ_g θ_g^{-u}` straight from the roots.
    pub fn root_power_sum(&self, u: usize) -> Option<Complex64> {
        u.checked_sub(1).and_then(|i| self.root_power_sums.get(i)).copied()
    }

    /// `Σ_g |θ_g|^{-u}`, the natural size of the `u`-th power sum.
    pub fn power_sum_scale(&self, u: usize) -> f64 {
        self.roots.iter().map(|r| r.norm().powi(-(u as i32))).sum()
    }

    /// `Σ_{μ≤j} θ_g^μ/μ!` per root.
    pub fn partial_sums(&self, j: usize) -> Vec<Complex64> {
        self.roots.iter().map(|&r| truncated_exp(r, j)).collect()
    }
}

fn truncated_exp(z: Complex64, j: usize) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for mu in 1..=j {
        term *= z / mu as f64;
        sum += term;
    }
    sum
}

/// `(p(z), p'(z))` for `p(z) = Σ_μ (k!/μ!) z^μ`.
fn scaled_poly(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

// Running-error bound for Horner evaluation of `p` at `z`.
fn horner_error_bound(coeffs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    let magnitude = coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs());
    8.0 * coeffs.len() as f64 * f64::EPSILON * magnitude
}

fn aberth(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    const MAX_ITER: usize = 500;
    let k = coeffs.len() - 1;
    let radius = (coeffs[0] / coeffs[k]).powf(1.0 / k as f64);
    let mut z: Vec<Complex64> = (0..k)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / k as f64 + 0.4;
            Complex64::from_polar(radius * (1.0 + 0.01 * i as f64 / k as f64), angle)
        })
        .collect();
    let mut done = vec![false; k];
    for _ in 0..MAX_ITER {
        for i in 0..k {
            if done[i] {
                continue;
            }
            let (p, dp) = scaled_poly(coeffs, z[i]);
            if p.norm() <= horner_error_bound(coeffs, z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..k)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            z[i] -= step;
            if step.norm() <= 1e-16 * z[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    Err(Error::Convergence {
        what: "trunc_exp_roots",
        iterations: MAX_ITER,
    })
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

// Compensated Horner: `p(z)` as accurate as if evaluated in twice the working
// precision.
fn scaled_poly_compensated(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut hi = Complex64::new(0.0, 0.0);
    let mut lo = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        let (a, ea) = two_prod(hi.re, z.re);
        let (b, eb) = two_prod(-hi.im, z.im);
        let (re, er) = two_sum(a, b);
        let (cr, ecr) = two_sum(re, c);
        let (d, ed) = two_prod(hi.re, z.im);
        let (e, ee) = two_prod(hi.im, z.re);
        let (im, ei) = two_sum(d, e);
        let err = Complex64::new(ea + eb + er + ecr, ed + ee + ei);
        lo = lo * z + err;
        hi = Complex64::new(cr, im);
    }
    hi + lo
}

fn polish(coeffs: &[f64], roots: Vec<Complex64>) -> Vec<Complex64> {
    roots
        .into_iter()
        .map(|mut r| {
            for _ in 0..4 {
                let p = scaled_poly_compensated(coeffs, r);
                let dp = scaled_poly(coeffs, r).1;
                if dp.norm() == 0.0 {
                    break;
                }
                r -= p / dp;
            }
            r
        })
        .collect()
}

// Pairs roots with their conjugates and averages each pair, so the multiset is
// conjugate-closed exactly.
fn close_under_conjugation(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    roots.sort_by(|a, b| a.im.total_cmp(&b.im));
    let k = roots.len();
    let lower: Vec<Complex64> = roots[..k / 2].to_vec();
    let mut upper: Vec<Complex64> = roots[k - k / 2..].to_vec();
    let mut out = Vec::with_capacity(k);
    for low in lower {
        let target = low.conj();
        let (idx, _) = upper
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - target).norm().total_cmp(&(b.1 - target).norm()))
            .expect("upper half matches lower half in size");
        let up = upper.swap_remove(idx);
        let avg = Complex64::new(0.5 * (up.re + low.re), 0.5 * (up.im - low.im).abs());
        out.push(avg);
        out.push(avg.conj());
    }
    if k % 2 == 1 {
        out.push(Complex64::new(roots[k / 2].re, 0.0));
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

/// Exact `Σ_g θ_g^{-u}` for `u = 1..=u_max` by Newton's identities.
pub fn newton_girard(k: usize, u_max: usize) -> Vec<BigRational> {
    let mut fact = BigInt::one();
    let mut a = vec![BigRational::one()];
    for i in 1..=k {
        fact *= BigInt::from(i);
        a.push(BigRational::new(BigInt::one(), fact.clone()));
    }
    let mut p: Vec<BigRational> = Vec::with_capacity(u_max);
    for m in 1..=u_max {
        let mut acc = BigRational::zero();
        for i in 1..m.min(k + 1) {
            acc += &a[i] * &p[m - i - 1];
        }
        if m <= k {
            acc += &a[m] * BigRational::from_integer(BigInt::from(m));
        }
        p.push(-acc);
    }
    p
}

/// The `k` roots of `Σ_{μ≤k} θ^μ/μ!` with power sums up to
/// `max(2k+2, MIN_POWER_SUMS)`.
pub fn trunc_exp_roots(k: usize) -> Result<ThetaSystem> {
    if !(1..=MAX_THETA_K).contains(&k) {
        return Err(Error::domain(
            "trunc_exp_roots",
            format!("k = {k} not in 1..={MAX_THETA_K}"),
        ));
    }
    let kf = factorial(k);
    let coeffs: Vec<f64> = (0..=k).map(|mu| kf / factorial(mu)).collect();
    let roots = close_under_conjugation(polish(&coeffs, aberth(&coeffs)?));

    let residuals: Vec<f64> = roots.iter().map(|&r| truncated_exp(r, k).norm()).collect();
    let bound = 1e-12 * kf;
    if let Some(bad) = residuals.iter().find(|&&r| r > bound) {
        return Err(Error::Accuracy {
            what: format!("trunc_exp_roots({k})"),
            detail: format!("root residual {bad:e} exceeds {bound:e}"),
        });
    }

    let u_max = (2 * k + 2).max(MIN_POWER_SUMS);
    let exact_power_sums = newton_girard(k, u_max);
    let power_sums = exact_power_sums
        .iter()
        .map(|q| q.to_f64().expect("finite power sum"))
        .collect();
    let inverses: Vec<Complex64> = roots.iter().map(|r| r.inv()).collect();
    let root_power_sums = (1..=u_max)
        .map(|u| compensated_sum_complex(inverses.iter().map(|w| w.powu(u as u32))))
        .collect();
    let exp_factors = roots.iter().map(|r| (-2.0 * r).exp()).collect();

    Ok(ThetaSystem {
        k,
        roots,
        residuals,
        power_sums,
        exp_factors,
        exact_power_sums,
        root_power_sums,
    })
}

/// `Σ_g θ_g^{-u}` after checking the root-side value against the exact one.
pub fn power_sum(ts: &ThetaSystem, u: usize) -> Result<f64> {
    if u == 0 || u > ts.u_max() {
        return Err(Error::domain(
            "power_sum",
            format!("u = {u} not in 1..={}", ts.u_max()),
        ));
    }
    let exact = ts.power_sums[u - 1];
    let from_roots = ts.root_power_sums[u - 1];
    let scale = ts.power_sum_scale(u);
    let bound = POWER_SUM_TOL * scale;
    if from_roots.im.abs() > bound {
        return Err(Error::ImaginaryLeak {
            what: format!("power_sum(k = {}, u = {u})", ts.k),
            im: from_roots.im,
            bound,
        });
    }
    if (from_roots.re - exact).abs() > bound {
        return Err(Error::Accuracy {
            what: format!("power_sum(k = {}, u = {u})", ts.k),
            detail: format!("roots give {}, coefficients give {exact}", from_roots.re),
        });
    }
    Ok(exact)
}

/// First-order zero location `1 - 2θ/L`, `L = ln(T/2π)`.
pub fn z_from_theta(theta: Complex64, t_big: f64) -> Result<Complex64> {
    if !(t_big >= 10.0) || !t_big.is_finite() {
        return Err(Error::domain("z_from_theta", format!("T = {t_big} must be at least 10")));
    }
    let l = (t_big / (2.0 * std::f64::consts::PI)).ln();
    Ok(1.0 - 2.0 * theta / l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_systems() {
        let one = trunc_exp_roots(1).unwrap();
        assert_eq!(one.roots(), &[Complex64::new(-1.0, 0.0)]);
        let two = trunc_exp_roots(2).unwrap();
        let r = two.roots();
        assert!((r[0] - Complex64::new(-1.0, -1.0)).norm() < 1e-15);
        assert!((r[1] - Complex64::new(-1.0, 1.0)).norm() < 1e-15);
        assert!(trunc_exp_roots(0).is_err());
        assert!(trunc_exp_roots(41).is_err());
    }

    #[test]
    fn k_five_pattern() {
        let ts = trunc_exp_roots(5).unwrap();
        assert_eq!(ts.roots().len(), 5);
        assert!(ts.residuals().iter().all(|&r| r <= 1e-12 * 120.0));
        assert!((power_sum(&ts, 1).unwrap() + 1.0).abs() < 1e-10);
        for u in 2..=5 {
            assert!(power_sum(&ts, u).unwrap().abs() < 1e-10);
        }
        assert!((power_sum(&ts, 6).unwrap() * 120.0 - 1.0).abs() < 1e-10);
        // u = 2k+2 with k odd: ((-1)^{k+1} + 1)/(k!(k+1)!) = 2/(120·720)
        let expected = 2.0 / (120.0 * 720.0);
        assert!((power_sum(&ts, 12).unwrap() - expected).abs() <= 1e-9 * expected);
    }

    #[test]
    fn newton_girard_exact_values() {
        let p = newton_girard(4, 10);
        assert_eq!(p[0], BigRational::from_integer((-1).into()));
        for u in 2..=4 {
            assert!(p[u - 1].is_zero());
        }
        assert_eq!(p[4], BigRational::new(1.into(), 24.into()));
        // k even: the u = 2k+2 entry vanishes.
        assert!(p[9].is_zero());
    }

    #[test]
    fn exp_factors_and_z() {
        let ts = trunc_exp_roots(3).unwrap();
        for (r, e) in ts.roots().iter().zip(ts.exp_factors()) {
            assert!((e - (-2.0 * r).exp()).norm() < 1e-15 * e.norm());
        }
        let t = 2.0 * std::f64::consts::PI * std::f64::consts::E;
        let z = z_from_theta(Complex64::new(-1.0, 0.0), t).unwrap();
        assert!((z - Complex64::new(3.0, 0.0)).norm() < 1e-14);
        assert!(z_from_theta(Complex64::new(-1.0, 0.0), 9.0).is_err());
    }

    #[test]
    fn exponential_factor_vs_first_order_power() {
        // (T/2π)^{z-1} with z = 1 - 2θ/L is e^{-2θ} up to rounding.
        let t_big = 1e6;
        let l = (t_big / (2.0 * std::f64::consts::PI)).ln();
        let ts = trunc_exp_roots(3).unwrap();
        for (r, e) in ts.roots().iter().zip(ts.exp_factors()) {
            let z = z_from_theta(*r, t_big).unwrap();
            let power = ((z - 1.0) * l).exp();
            assert!((power - e).norm() <= 1e-12 / l);
        }
    }

    #[test]
    fn largest_supported_k() {
        let ts = trunc_exp_roots(MAX_THETA_K).unwrap();
        assert_eq!(ts.roots().len(), MAX_THETA_K);
        assert!((power_sum(&ts, 1).unwrap() + 1.0).abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn conjugate_closed_and_sorted(k in 1usize..=MAX_THETA_K) {
            let ts = trunc_exp_roots(k).unwrap();
            let roots = ts.roots();
            prop_assert_eq!(roots.len(), k);
            prop_assert!(roots.iter().all(|r| r.norm() > 0.0));
            for w in roots.windows(2) {
                prop_assert!((w[0].re, w[0].im) <= (w[1].re, w[1].im));
            }
            for r in roots {
                prop_assert!(roots.iter().any(|q| *q == r.conj()));
            }
            prop_assert!(ts.residuals().iter().all(|&x| x <= 1e-12 * factorial(k)));
        }

        #[test]
        fn root_and_coefficient_power_sums_agree(k in 1usize..=20) {
            let ts = trunc_exp_roots(k).unwrap();
            for u in 1..=2 * k + 2 {
                prop_assert!(power_sum(&ts, u).is_ok(), "k={} u={}", k, u);
            }
        }

        #[test]
        fn full_partial_sum_vanishes(k in 1usize..=20) {
            let ts = trunc_exp_roots(k).unwrap();
            for v in ts.partial_sums(k) {
                prop_assert!(v.norm() <= 1e-12 * factorial(k));
            }
        }
    }
}
