use std::process::{Command, Output};

fn hzml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hzml"))
        .args(args)
        .env_remove("HZML_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn identity_sweep_is_clean() {
    let out = hzml(&["identities", "--j-max", "6", "--k-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "1");
    assert!(v["report"]["checked"].as_u64().unwrap() > 100);
    assert_eq!(v["report"]["nonzero_gaps"].as_array().unwrap().len(), 0);
}

#[test]
fn asymptotic_coefficient_for_first_derivative_zeros() {
    let out = hzml(&["coeff", "--j", "0", "--k", "1", "--asymptotic"]);
    assert_eq!(out.status.code(), Some(0));
    let per_tl = json(&out)["report"]["per_TL"].as_f64().unwrap();
    let expected = (std::f64::consts::E.powi(2) - 5.0) / (4.0 * std::f64::consts::PI);
    assert!((per_tl - expected).abs() < 1e-12);
}

#[test]
fn no_zeros_below_three() {
    let out = hzml(&["zeros", "--k", "0", "--t-max", "3", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, b"index,gamma,bracket_width\n");
}

#[test]
fn zero_table_csv() {
    let out = hzml(&["zeros", "--k", "0", "--t-max", "30", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 1 + 3);
    let gamma: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((gamma - 14.134725141734693).abs() < 1e-8);
    assert!(!text.contains('\r'));
}

#[test]
fn byte_identical_across_worker_counts() {
    for args in [
        vec!["verify", "--j", "1", "--k", "1", "--t-max", "300"],
        vec!["cmoment", "--j", "1", "--t-max", "200"],
        vec!["theta-roots", "--k", "7"],
    ] {
        let base = hzml(&[args.as_slice(), &["--workers", "1"]].concat());
        assert_eq!(base.status.code(), Some(0), "{args:?}");
        for w in ["2", "5"] {
            let other = hzml(&[args.as_slice(), &["--workers", w]].concat());
            assert_eq!(base.stdout, other.stdout, "{args:?} with {w} workers");
        }
    }
}

#[test]
fn worker_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hzml"))
        .args(["zeros", "--k", "1", "--t-max", "60", "--csv"])
        .env("HZML_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, hzml(&["zeros", "--k", "1", "--t-max", "60", "--csv"]).stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_hzml"))
        .args(["theta-roots", "--k", "2"])
        .env("HZML_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        vec!["coeff", "--j", "13", "--k", "1", "--asymptotic"],
        vec!["coeff", "--j", "0", "--k", "1", "--T", "50"],
        vec!["zeros", "--k", "0", "--t-max", "60000"],
        vec!["moment", "--j", "9", "--k", "0", "--t-max", "100"],
        vec!["cmoment", "--j", "1", "--t-max", "100", "--tol", "-1"],
        vec!["coeff", "--j", "0", "--k", "1", "--asymptotic", "--csv"],
        vec!["theta-roots"],
    ] {
        assert_eq!(hzml(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn report_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("moment.json");
    let out = hzml(&["moment", "--j", "0", "--k", "1", "--t-max", "100", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "moment");
    assert!(v["report"]["n_zeros_used"].as_u64().unwrap() > 20);
    assert!(v["report"]["measured"].as_f64().unwrap() > 0.0);
}

#[test]
fn finite_and_refined_breakdowns() {
    let a = json(&hzml(&["coeff", "--j", "1", "--k", "2", "--T", "1e5"]));
    let b = json(&hzml(&["coeff", "--j", "1", "--k", "2", "--T", "1e5", "--refined"]));
    assert_eq!(a["report"]["mode"], "finite");
    assert_eq!(b["report"]["mode"], "finite-refined");
    let total = a["report"]["total"].as_f64().unwrap();
    let terms: Vec<f64> = ["term_delta", "term_cg", "term_u", "term_p2j2", "term_exp"]
        .iter()
        .map(|f| a["report"][f].as_f64().unwrap())
        .collect();
    let largest = terms.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!((total - terms.iter().sum::<f64>()).abs() < 1e-12 * largest);
}
