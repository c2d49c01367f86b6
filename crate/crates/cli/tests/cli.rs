use serde_json::Value;
use std::process::{Command, Output};

fn maass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maass"))
        .args(args)
        .env_remove("MAASS_THREADS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn coeff_table_for_class_numbers() {
    let out = maass(&[
        "coeff", "--plus", "--m", "0", "--twice-k", "3", "--N", "4", "--s", "0.75", "--n", "1..8",
        "--c-max", "8192", "--reproducible",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let js = json_of(&out);
    assert!(js.get("generated_at").is_none());
    let rows = js["rows"].as_array().unwrap();
    let ns: Vec<i64> = rows.iter().map(|r| r["n"].as_i64().unwrap()).collect();
    assert_eq!(ns, vec![3, 4, 7, 8]);
    let b3: f64 = rows[0]["re"].to_string().parse().unwrap();
    let h3 = -(3.0 / std::f64::consts::PI).sqrt() / 6.0 * b3;
    assert!((h3 - 1.0 / 3.0).abs() < 2e-2, "{h3}");
}

#[test]
fn output_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let base = [
        "coeff", "--m", "0", "--twice-k", "8", "--N", "1", "--s", "2", "--n", "1..20", "--c-max", "256",
        "--reproducible", "--out",
    ];
    let mut args_a: Vec<&str> = base.to_vec();
    args_a.push(a.to_str().unwrap());
    args_a.extend(["--threads", "1"]);
    let mut args_b: Vec<&str> = base.to_vec();
    args_b.push(b.to_str().unwrap());
    args_b.extend(["--threads", "3"]);
    assert_eq!(maass(&args_a).status.code(), Some(0));
    assert_eq!(maass(&args_b).status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let js: Value = serde_json::from_slice(&ta).unwrap();
    let re = |i: usize| -> f64 { js["rows"][i]["re"].to_string().parse().unwrap() };
    assert!((re(1) / re(0) * 8.0 - 9.0).abs() < 1e-6);
}

#[test]
fn timestamp_present_by_default() {
    let out = maass(&["kloosterman", "--twice-k", "0", "--m", "1", "--n", "1", "--c", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_of(&out)["generated_at"].is_u64());
}

#[test]
fn basis_g_has_constant_minus_two() {
    let out = maass(&["basis", "g", "--D", "-4", "--nmax", "4", "--c-max", "2048", "--reproducible"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let js = json_of(&out);
    assert_eq!(js["weight_times_2"], 3);
    assert_eq!(js["basis"], "g");
    let c0 = js["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c[0] == 0)
        .expect("constant term");
    assert_eq!(c0[1].to_string().parse::<f64>().unwrap(), -2.0);
}

#[test]
fn basis_csv_is_marked_lossy() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("f.csv");
    let out = maass(&[
        "basis", "f", "--d", "0", "--nmax", "9", "--format", "csv", "--out", p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&p).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    assert_eq!(lines.next().unwrap(), "n,re,im,err");
    assert_eq!(lines.count(), 4);
}

#[test]
fn strict_mode_refuses_unconverged_values() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.json");
    let out = maass(&[
        "coeff", "--plus", "--m", "0", "--twice-k", "3", "--N", "4", "--s", "0.75", "--n", "3", "--c-max", "64",
        "--tol", "1e-12", "--strict", "--out", p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!p.exists());
}

#[test]
fn verify_reports_per_check_defects() {
    let out = maass(&["verify", "kloosterman-symmetry", "--reproducible"]);
    assert_eq!(out.status.code(), Some(0));
    let js = json_of(&out);
    assert_eq!(js["pass"], true);
    let checks = js["suites"][0]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        let d: f64 = c["defect"].to_string().parse().unwrap();
        assert!(d <= 1e-10);
    }
    let out = maass(&["verify", "theta-automorphy"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(maass(&["verify", "no-such-suite"]).status.code(), Some(1));
    assert_eq!(maass(&["--frobnicate"]).status.code(), Some(1));
    assert_eq!(maass(&["coeff", "--m", "0"]).status.code(), Some(1));
    assert_eq!(maass(&["basis", "f", "--d", "-2"]).status.code(), Some(1));
    assert_eq!(maass(&["basis", "g", "--D", "3"]).status.code(), Some(1));
    assert_eq!(maass(&["kloosterman", "--twice-k", "1", "--m", "0", "--n", "0", "--c", "9..2"]).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_maass"))
        .args(["kloosterman", "--twice-k", "0", "--m", "1", "--n", "1", "--c", "3"])
        .env("MAASS_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(maass(&["--help"]).status.code(), Some(0));
}
