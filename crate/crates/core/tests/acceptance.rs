//! End-to-end acceptance criteria, run without the test harness so that the
//! PASS/FAIL line of each criterion is always printed. Exits nonzero if any
//! criterion fails.

use std::f64::consts::{E, PI};
use std::process::ExitCode;
use std::time::Instant;

use hzml::coeff::{
    asymptotic_coefficient, breakdown, combi_sum, first_term_sum, step4_sums, yildirim_compare, Mode,
};
use hzml::hardy::{fe_residual, refine_script_zk_root, script_zk, z_deriv};
use hzml::moments::{census, continuous_moment, find_zeros, interlace_counts, verify, DEFAULT_DENSITY};
use hzml::stieltjes::stieltjes;
use hzml::theta_roots::trunc_exp_roots;
use hzml::ComplexPoint;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn conrey_ghosh_anchor() -> Outcome {
    let c = asymptotic_coefficient(0, 1).map_err(|e| e.to_string())?;
    let gap = (c - (E * E - 5.0) / (4.0 * PI)).abs();
    check(gap <= 1e-12, format!("C(0,1) = {c:.15}, gap {gap:.1e}"))
}

fn diagonal_vanishing() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..=12 {
        let b = breakdown(k, k, 1e6, Mode::Asymptotic).map_err(|e| e.to_string())?;
        asymptotic_coefficient(k, k).map_err(|e| e.to_string())?;
        worst = worst.max(b.per_tl.abs() / b.reference_scale);
    }
    check(worst <= 1e-12, format!("max |C(k,k)|/scale = {worst:.1e} over k ≤ 12"))
}

fn power_sum_identities() -> Outcome {
    let mut worst = 0.0f64;
    let mut root_side = 0.0f64;
    for k in 1..=20 {
        let ts = trunc_exp_roots(k).map_err(|e| e.to_string())?;
        let mut expect = vec![(1, -1.0), (k + 1, 1.0 / factorial(k))];
        expect.extend((2..=k).map(|u| (u, 0.0)));
        let odd_even = if k % 2 == 1 { 2.0 } else { 0.0 };
        expect.push((2 * k + 2, odd_even / (factorial(k) * factorial(k + 1))));
        for (u, want) in expect {
            let got = hzml::theta_roots::power_sum(&ts, u).map_err(|e| format!("k={k} u={u}: {e}"))?;
            let scale = want.abs().max(ts.power_sum_scale(u));
            worst = worst.max((got - want).abs() / scale);
            let roots = ts.root_power_sum(u).ok_or(format!("k={k}: no root-side sum for u={u}"))?;
            root_side = root_side.max((roots.re - got).abs().max(roots.im.abs()) / scale);
        }
    }
    check(
        worst <= 1e-9 && root_side <= 1e-9,
        format!("max relative gap {worst:.1e}, root side {root_side:.1e} over k ≤ 20"),
    )
}

fn combinatorial_suite() -> Outcome {
    let mut n = 0;
    for j in 0..=12 {
        for u in 0..=j {
            let r = combi_sum(j, u).map_err(|e| e.to_string())?;
            if r.abs_gap != 0.0 {
                return Err(format!("combi_sum({j}, {u}) gap {}", r.abs_gap));
            }
            n += 1;
        }
    }
    for j in 0..=15 {
        let r = first_term_sum(j).map_err(|e| e.to_string())?;
        if r.abs_gap != 0.0 {
            return Err(format!("first_term_sum({j}) gap {}", r.abs_gap));
        }
        n += 1;
    }
    let mut worst = 0.0f64;
    for j in 0..=6 {
        for k in 0..=8 {
            for r in step4_sums(j, k).map_err(|e| e.to_string())? {
                worst = worst.max(r.rel_gap());
                n += 1;
            }
        }
    }
    check(worst <= 1e-10, format!("{n} identities, worst S-sum gap {worst:.1e}"))
}

fn continuous_moment_check() -> Outcome {
    let c0 = stieltjes(0).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for (t, tol) in [(1000.0, 0.02), (5000.0, 0.01)] {
        let measured = continuous_moment(0, t).map_err(|e| e.to_string())?;
        let predicted = t * ((t / (2.0 * PI)).ln() + 2.0 * c0 - 1.0);
        let rel = (measured / predicted - 1.0).abs();
        ok &= rel <= tol;
        parts.push(format!("T={t}: rel {rel:.2e}"));
    }
    check(ok, parts.join(", "))
}

fn zero_census() -> Outcome {
    let t: f64 = 500.0;
    let bound = 10.0 + 2.0 * t.ln();
    let mut parts = Vec::new();
    for k in 0..=2 {
        let c = census(k, t, DEFAULT_DENSITY).map_err(|e| e.to_string())?;
        if c.deviation.abs() > bound {
            return Err(format!("k={k}: deviation {:.2}", c.deviation));
        }
        parts.push(format!("k={k}: {} zeros, dev {:+.2}", c.zeros.len(), c.deviation));
    }
    Ok(parts.join(", "))
}

fn interlacing() -> Outcome {
    let (lo, hi) = (50.0, 500.0);
    let lists: Vec<_> = (0..=2)
        .map(|k| find_zeros(k, 40.0, 510.0, DEFAULT_DENSITY).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let mut gaps = 0;
    for k in 0..=1 {
        for (a, b, n) in interlace_counts(&lists[k], &lists[k + 1], lo, hi) {
            if n != 1 {
                return Err(format!("k={k}: {n} zeros of the next derivative in ({a:.6}, {b:.6})"));
            }
            gaps += 1;
        }
    }
    Ok(format!("{gaps} gaps, one zero each"))
}

fn end_to_end_moments() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (j, k, lo, hi) in [(0, 1, 0.75, 1.25), (1, 2, 0.6, 1.4)] {
        let small = verify(j, k, 500.0, DEFAULT_DENSITY).map_err(|e| e.to_string())?;
        let large = verify(j, k, 2000.0, DEFAULT_DENSITY).map_err(|e| e.to_string())?;
        let in_window = (lo..=hi).contains(&large.ratio);
        let trend = (large.ratio - 1.0).abs() <= 1.5 * (small.ratio - 1.0).abs();
        ok &= in_window && trend;
        parts.push(format!("({j},{k}) ratio {:.4} -> {:.4}", small.ratio, large.ratio));
    }
    check(ok, parts.join(", "))
}

fn derivative_stencil() -> Outcome {
    let h = 1e-4;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let t = 10.0 + 19.87 * i as f64 + 0.123;
        for j in 1..=4 {
            let f = |x: f64| z_deriv(x, j - 1);
            let fd = (f(t - 2.0 * h).unwrap() - 8.0 * f(t - h).unwrap() + 8.0 * f(t + h).unwrap()
                - f(t + 2.0 * h).unwrap())
                / (12.0 * h);
            let exact = z_deriv(t, j).map_err(|e| e.to_string())?;
            worst = worst.max((fd - exact).abs() / exact.abs().max(1.0));
        }
    }
    check(worst <= 1e-5, format!("max relative error {worst:.1e}"))
}

fn functional_equation() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..10 {
        for m in 0..10 {
            let p = ComplexPoint::new(-0.4 + 0.18 * i as f64, 3.0 + 97.0 * m as f64);
            for k in 0..=4 {
                worst = worst.max(fe_residual(p, k).map_err(|e| e.to_string())?);
            }
        }
    }
    check(worst <= 1e-8, format!("max residual {worst:.1e} on 100 points, k ≤ 4"))
}

fn script_zk_roots() -> Outcome {
    let t = 1e6;
    let l = (t / (2.0 * PI)).ln();
    let mut worst = 0.0f64;
    for k in 1..=3 {
        for &theta in trunc_exp_roots(k).map_err(|e| e.to_string())?.roots() {
            let seed = 1.0 - 2.0 * theta / l;
            let root = refine_script_zk_root(seed, k, t).map_err(|e| e.to_string())?;
            let residual = script_zk(root.into(), k, t).map_err(|e| e.to_string())?.norm();
            if residual > 1e-8 {
                return Err(format!("k={k}: residual {residual:.1e} at {root}"));
            }
            worst = worst.max((root - seed).norm() * l * l);
        }
    }
    check(worst <= 10.0, format!("max |z - seed|·L² = {worst:.3}"))
}

fn yildirim_trend() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for ks in [[4, 8, 16], [5, 9, 17]] {
        let gaps: Vec<f64> = ks
            .iter()
            .map(|&k| yildirim_compare(k).map(|r| r.abs_gap))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for (&k, &g) in ks.iter().zip(&gaps) {
            let kf = k as f64;
            ok &= g <= 10.0 * kf.ln() / (kf * kf);
            parts.push(format!("k={k}: {g:.5}"));
        }
        ok &= gaps.windows(2).all(|w| w[1] < w[0]);
    }
    check(ok, parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("conrey-ghosh anchor", conrey_ghosh_anchor),
        ("diagonal vanishing", diagonal_vanishing),
        ("power-sum identities", power_sum_identities),
        ("combinatorial suite", combinatorial_suite),
        ("continuous moment", continuous_moment_check),
        ("zero census", zero_census),
        ("interlacing", interlacing),
        ("end-to-end discrete moment", end_to_end_moments),
        ("derivative correctness", derivative_stencil),
        ("functional equation", functional_equation),
        ("script-Z root locations", script_zk_roots),
        ("yildirim trend", yildirim_trend),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: 12/12 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
