use std::path::Path;
use std::process::{Command, Output};

fn catport(args: &[&str], report_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catport"))
        .args(args)
        .env("CATPORT_REPORT_DIR", report_dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

#[test]
fn sampled_run_reports_unit_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let out = catport(&["run", "--protocol", "ghz-class", "--r", "0.5", "--alpha2", "0.3", "--seed", "7"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("fidelity: 1.000000000000"));
    let text = std::fs::read_to_string(dir.path().join("catport-report.json")).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["mode"], "sample");
    assert_eq!(report["seed"], 7);
    assert_eq!(report["branches"].as_array().unwrap().len(), 1);
    assert_eq!(report["summary"]["pass"], true);
    let fidelity = report["branches"][0]["fidelity"].as_f64().unwrap();
    assert!(fidelity > 1.0 - 1e-10);
    let top = ["script", "n", "mode", "seed", "input", "channel", "target", "branches", "summary"];
    let at: Vec<usize> = top.iter().map(|k| text.find(&format!("\n  \"{k}\":")).unwrap()).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn trivial_ghz_input_lands_on_zero_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = catport(&["run", "--protocol", "ghz", "--alpha2", "1.0", "--enumerate"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("catport-report.json")).unwrap()).unwrap();
    let branches = report["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 5);
    for b in branches.iter().filter(|b| b["reachable"] == true) {
        let amps = b["bob_state"]["amplitudes"].as_array().unwrap();
        assert!((amps[0][0].as_f64().unwrap().hypot(amps[0][1].as_f64().unwrap()) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn scenario_file_fields_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("scenario.json");
    std::fs::write(&file, r#"{"protocol": "cat", "n": 4, "r": 0.2, "alpha2": 0.9, "seed": 3}"#).unwrap();
    let path = file.to_str().unwrap();
    let out = catport(&["run", "--scenario", path, "--enumerate", "--n", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("catport-report.json")).unwrap()).unwrap();
    assert_eq!(report["n"], 3);
    assert_eq!(report["seed"], 3);
    assert_eq!(report["branches"].as_array().unwrap().len(), 16);
    assert_eq!(report["channel"]["overlaps"][0]["r"].as_f64().unwrap(), 0.2);
}

#[test]
fn unbalanced_weights_run_the_filter() {
    let dir = tempfile::tempdir().unwrap();
    let out = catport(&["run", "--protocol", "ghz-class", "--a2", "0.8", "--enumerate"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("ghz-class-filtered"));
    assert!(text.contains("success probability: 0.400000000000"));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_file = dir.path().join("bad.json");
    std::fs::write(&bad_file, r#"{"protocol": "ghz", "colour": "blue"}"#).unwrap();
    for args in [
        vec!["run", "--protocol", "ghz", "--n", "3"],
        vec!["run", "--r", "1.5"],
        vec!["run", "--a2", "1.0"],
        vec!["run", "--protocol", "cat", "--n", "9"],
        vec!["run", "--scenario", bad_file.to_str().unwrap()],
        vec!["run", "--scenario", "/nonexistent/scenario.json"],
        vec!["verify", "--protocol", "ghz", "--n", "3"],
        vec!["analyze", "--curve", "negativity", "--r-grid", "0:1"],
        vec!["analyze", "--curve", "e-max", "--r-grid", "1:0:0.1"],
        vec!["sweep", "--alpha2-grid", "0:1:0"],
        vec!["sweep", "--alpha2-grid", "0:2:0.5"],
        vec!["launch"],
    ] {
        let out = catport(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn injected_fault_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let out = catport(&["verify", "--protocol", "ghz-class", "--trials", "8", "--inject-fault", "psi+:a"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(psi+, a)"));
}

#[test]
fn verify_six_bob_cat() {
    let dir = tempfile::tempdir().unwrap();
    let out = catport(&["verify", "--protocol", "cat", "--N", "6", "--trials", "10"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.contains("cat N=6") && l.contains("branches/draw=128")));
    assert!(text.contains("PASS: "));
}

#[test]
fn verify_checks_scenario_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    std::fs::write(
        &file,
        r#"{"protocol": "ghz-class", "alpha": [0.6, 0.0], "beta": [0.0, 0.8],
            "phis": [[[1, 0], [0, 0]]], "phi_primes": [[[0.6, 0.0], [0.0, 0.8]]]}"#,
    )
    .unwrap();
    let out = catport(&["verify", "--scenario", file.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS  ")).count(), 1);
}

#[test]
fn negativity_column_is_half_the_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let out = catport(&["analyze", "--curve", "negativity", "--r-grid", "0:1:0.1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("r,negativity_AB2,negativity_AB1"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 11);
    for row in rows {
        assert!((row[1] - row[0] / 2.0).abs() < 1e-10);
        assert!(row[2].abs() < 1e-10);
    }
}

#[test]
fn e_max_at_zero_overlap_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = catport(&["analyze", "--curve", "e-max", "--r", "0"], dir.path());
    assert_eq!(stdout(&out), "r,entropy\n0.000000000000,1.000000000000\n");
}

#[test]
fn sweep_rises_then_mirrors() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let args = ["sweep", "--protocol", "ghz-class", "--r", "0.5", "--alpha2-grid", "0:1:0.01", "--out"];
    let out = catport(&[&args[..], &[csv.to_str().unwrap()]].concat(), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("r,alpha2,entropy"));
    let e: Vec<f64> = rows(&text).iter().map(|r| r[2]).collect();
    assert_eq!(e.len(), 101);
    let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
    assert!((e[50] - h(0.75)).abs() < 1e-9);
    assert!((e[50] - 0.811278).abs() < 1e-6);
    for i in 0..50 {
        assert!(e[i] < e[i + 1]);
        assert!((e[i] - e[100 - i]).abs() < 1e-9);
    }
}

#[test]
fn ghz_sweep_has_no_overlap_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = catport(&["sweep", "--protocol", "ghz", "--alpha2-grid", "0:1:0.25"], dir.path());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("alpha2,entropy"));
    assert_eq!(rows(&text).len(), 5);
}
