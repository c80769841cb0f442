//! End-to-end CLI behavior: exit codes, output schemas, and error messages.

use std::process::{Command, Output};

fn multop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("multop-cli-test-{name}-{}.json", std::process::id()));
    std::fs::write(&path, body).expect("temp config writes");
    path.to_string_lossy().into_owned()
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_reports_constant_symbol() {
    let path = write_config(
        "analyze",
        r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0, 2.0], "weights": [0.5, 0.5]},
            "symbol": {"kind": "constant", "n": 1, "matrix": [[2.0]]},
            "norm": {"type": "lp", "p": 2}
        }"#,
    );
    let out = multop(&["analyze", "--config", &path]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["operator_norm"], 2.0);
    assert_eq!(report["invertible"], "true");
    assert_eq!(report["spectrum"]["points"][0]["re"], 2.0);
    assert_eq!(report["spectrum"]["points"][0]["im"], 0.0);
    std::fs::remove_file(path).ok();
}

#[test]
fn malformed_json_exits_2_and_names_the_key() {
    let path = write_config(
        "malformed",
        r#"{"version": 1, "space": {"mode": "finite", "atoms": [1.0]}}"#,
    );
    let out = multop(&["analyze", "--config", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_str(&out).contains("weights"),
        "stderr should name the offending key: {}",
        stderr_str(&out)
    );
    std::fs::remove_file(path).ok();
}

#[test]
fn pole_at_positive_weight_atom_exits_3_and_names_the_atom() {
    let path = write_config(
        "pole",
        r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [0.0, 1.0], "weights": [0.5, 0.5]},
            "symbol": {"kind": "expr", "n": 1, "entries": [["1/x"]]}
        }"#,
    );
    let out = multop(&["analyze", "--config", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stderr_str(&out).contains("atom 0"),
        "stderr should name the atom: {}",
        stderr_str(&out)
    );
    std::fs::remove_file(path).ok();
}

#[test]
fn evolve_decay_produces_exponential_csv() {
    let path = write_config(
        "evolve",
        r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0], "weights": [1.0]},
            "symbol": {"kind": "constant", "n": 1, "matrix": [[-1.0]]},
            "task": {"t_grid": [0.0, 1.0]}
        }"#,
    );
    let out = multop(&["evolve", "--config", &path]);
    assert!(out.status.success());
    let csv = stdout_str(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,atom_index,component,re,im");
    let row: Vec<&str> = lines[2].split(',').collect();
    let value: f64 = row[3].parse().unwrap();
    assert!((value - (-1.0f64).exp()).abs() <= 1e-12);
    // summary JSON goes to stderr when the CSV goes to stdout
    let summary: serde_json::Value = serde_json::from_str(&stderr_str(&out)).unwrap();
    assert_eq!(summary["generates_c0"], true);
    std::fs::remove_file(path).ok();
}

#[test]
fn evolve_nilpotent_closed_form() {
    let path = write_config(
        "nilpotent",
        r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0], "weights": [1.0]},
            "symbol": {"kind": "constant", "n": 2, "matrix": [[0.0, 1.0], [0.0, 0.0]]},
            "task": {"t_grid": [0.0, 1.0], "initial": [0.0, 1.0]}
        }"#,
    );
    let out = multop(&["evolve", "--config", &path]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let csv = stdout_str(&out);
    // rows at t = 1: components (1, 1) since e^{tu}(0,1) = (t, 1)
    let lines: Vec<&str> = csv.lines().collect();
    let c0: Vec<&str> = lines[3].split(',').collect();
    let c1: Vec<&str> = lines[4].split(',').collect();
    assert!((c0[3].parse::<f64>().unwrap() - 1.0).abs() <= 1e-12);
    assert!((c1[3].parse::<f64>().unwrap() - 1.0).abs() <= 1e-12);
    std::fs::remove_file(path).ok();
}

#[test]
fn evolve_rejects_non_ascending_grid_with_exit_2() {
    let path = write_config(
        "badgrid",
        r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0], "weights": [1.0]},
            "symbol": {"kind": "constant", "n": 1, "matrix": [[1.0]]},
            "task": {"t_grid": [0.0, 1.0, 0.5]}
        }"#,
    );
    let out = multop(&["evolve", "--config", &path]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(path).ok();
}

#[test]
fn evolve_generation_failure_needs_force() {
    // unbounded tail envelope: the strong-generation check cannot certify
    let body = r#"{
        "version": 1,
        "space": {"mode": "sequence", "truncation": 8,
                  "weight_rule": {"type": "inverse_power", "coeff": 1.0, "power": 2.0}},
        "symbol": {"kind": "expr", "n": 1, "entries": [["i*x"]],
                   "tail": {"envelope": "unbounded", "spectral_bound": 0.0,
                            "support": true, "norm_floor": 1.0}},
        "task": {"t_grid": [0.0, 1.0]}
    }"#;
    let path = write_config("force", body);
    let out = multop(&["evolve", "--config", &path]);
    assert_eq!(out.status.code(), Some(4));
    let forced = multop(&["evolve", "--config", &path, "--force"]);
    assert!(forced.status.success(), "stderr: {}", stderr_str(&forced));
    std::fs::remove_file(path).ok();
}

#[test]
fn verify_builtin_passes_and_fails_under_fault_injection() {
    let out = multop(&["verify", "--suite", "builtin", "--seed", "7"]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    assert!(stdout_str(&out).contains("all 12 checks passed"));

    let broken = multop(&[
        "verify",
        "--suite",
        "builtin",
        "--seed",
        "7",
        "--inject-norm-bug",
    ]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(stdout_str(&broken).contains("FAIL norm_formula_vs_probe_oracle"));
}

#[test]
fn verify_unknown_suite_exits_2() {
    let out = multop(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_scoped_verify_restricts_to_applicable_checks() {
    let path = write_config(
        "scoped",
        r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0, 2.0, 3.0], "weights": [0.2, 0.5, 0.3]},
            "symbol": {"kind": "expr", "n": 1, "entries": [["exp(i*x)"]]},
            "norm": {"type": "lorentz", "p": 2, "q": 1}
        }"#,
    );
    let out = multop(&["verify", "--config", &path]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    assert!(text.contains("scalar_spectrum_equals_essential_range"));
    assert!(text.contains("norm_formulas_and_probe_oracle"));
    std::fs::remove_file(path).ok();
}

#[test]
fn laplace_subcommand_reports_small_error() {
    let path = write_config(
        "laplace",
        r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0, 2.0], "weights": [0.5, 0.5]},
            "symbol": {"kind": "constant", "n": 1, "matrix": [[-1.0]]},
            "task": {"lambda": {"re": 1.0}, "m": 0, "t_max": 30.0}
        }"#,
    );
    let out = multop(&["laplace", "--config", &path]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let error = report["relative_error"].as_f64().unwrap();
    assert!(error <= 1e-9, "relative error {error}");
    std::fs::remove_file(path).ok();
}

#[test]
fn analyze_and_evolve_are_byte_deterministic() {
    let path = write_config(
        "determinism",
        r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0, 2.0, 3.0], "weights": [0.25, 0.5, 0.25]},
            "symbol": {"kind": "expr", "n": 2,
                       "entries": [["cos(x)", "0.1*x"], ["0", "-x"]]},
            "norm": {"type": "orlicz", "phi": "tp_log", "p": 2},
            "task": {"t_grid": [0.0, 0.5, 1.0], "seed": 9}
        }"#,
    );
    let first = multop(&["analyze", "--config", &path]);
    let second = multop(&["analyze", "--config", &path]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let first = multop(&["evolve", "--config", &path]);
    let second = multop(&["evolve", "--config", &path]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stderr, second.stderr);
    std::fs::remove_file(path).ok();
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let path = write_config(
        "outfile",
        r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0], "weights": [1.0]},
            "symbol": {"kind": "constant", "n": 1, "matrix": [[2.0]]}
        }"#,
    );
    let out_path = std::env::temp_dir().join(format!("multop-out-{}.json", std::process::id()));
    let out = multop(&[
        "analyze",
        "--config",
        &path,
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout_str(&out).is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(report["operator_norm"], 2.0);
    std::fs::remove_file(path).ok();
    std::fs::remove_file(out_path).ok();
}
