//! End-to-end tests of the binary: exit codes, strict config validation,
//! deterministic reports, CSV output.

use std::io::Write;
use std::process::Command;

fn dehp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dehp"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = dehp().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn verify_passes_for_all_models() {
    for model in ["model1", "model2", "spin2_2d", "xyz_dm_2d"] {
        let (code, stdout, stderr) = run(&["verify", "--model", model, "--no-timestamp"]);
        assert_eq!(code, 0, "{model}: stderr={stderr}");
        let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(doc["pass"], true, "{model}");
        assert!(doc["checks"].as_array().unwrap().len() >= 3);
    }
}

#[test]
fn parameter_domain_violation_exits_two() {
    let (code, _, stderr) = run(&[
        "verify",
        "--model",
        "model1",
        "--set",
        "params.D=[0.0,1.0,1.0]",
        "--no-timestamp",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("parameter domain"), "stderr: {stderr}");
}

#[test]
fn unknown_config_keys_exit_two() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{
            "model": "model1",
            "params": {{"two_s": 1, "D": [1.0, 1.0, 1.0], "a": [2.0, 0.0]}},
            "lattice": {{"kind": "ring", "n": 6}},
            "mistyped_key": true
        }}"#
    )
    .unwrap();
    let (code, _, stderr) = run(&["verify", "--config", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown field"), "stderr: {stderr}");
}

#[test]
fn impossible_tolerance_exits_one() {
    let (code, stdout, _) = run(&[
        "verify",
        "--model",
        "model1",
        "--set",
        "tolerance=1e-20",
        "--no-timestamp",
    ]);
    assert_eq!(code, 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["pass"], false);
}

#[test]
fn config_file_with_flag_overrides() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{
            "command": "spectrum",
            "model": "model1",
            "params": {{"two_s": 1, "D": [1.3, 0.6, 0.8], "a": [2.0, 0.0]}},
            "lattice": {{"kind": "ring", "n": 4}}
        }}"#
    )
    .unwrap();
    let (code, stdout, stderr) = run(&[
        "spectrum",
        "--config",
        f.path().to_str().unwrap(),
        "--set",
        "lattice.n=6",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0, "stderr={stderr}");
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    // flag override wins: N = 6 gives the 5-fold zero space
    assert_eq!(doc["config"]["lattice"]["n"], 6);
    assert_eq!(doc["spectrum"]["zero_count"], 5);
    assert_eq!(doc["momentum_counts"][0], 4);
    // config echoing the wrong command is rejected
    let (code, _, stderr) = run(&["verify", "--config", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("command"), "stderr: {stderr}");
}

#[test]
fn reports_are_byte_identical_for_fixed_seed() {
    let args = [
        "solve",
        "--model",
        "model1",
        "--seed",
        "7",
        "--set",
        "solve.multistarts=6",
        "--no-timestamp",
    ];
    let (c1, out1, _) = run(&args);
    let (c2, out2, _) = run(&args);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(out1, out2, "identical config + seed must produce identical bytes");
    // and a different seed changes the run
    let (_, out3, _) = run(&[
        "solve",
        "--model",
        "model1",
        "--seed",
        "8",
        "--set",
        "solve.multistarts=6",
        "--no-timestamp",
    ]);
    assert_ne!(out1, out3);
}

#[test]
fn correlate_emits_csv() {
    let (code, stdout, _) = run(&[
        "correlate",
        "--model",
        "model2",
        "--set",
        "lattice.n=12",
        "--set",
        "correlate.r_max=4",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "r,re,im,connected_re,connected_im");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    // connected correlator decays monotonically for this model
    let conn: Vec<f64> = rows
        .iter()
        .map(|r| r.split(',').nth(3).unwrap().parse::<f64>().unwrap().abs())
        .collect();
    for w in conn.windows(2) {
        assert!(w[1] < w[0], "decay must be monotone: {conn:?}");
    }
}

#[test]
fn spectrum_csv_dumps_eigenvalues() {
    let (code, stdout, _) = run(&[
        "spectrum",
        "--model",
        "model2",
        "--set",
        "lattice.n=4",
        "--format",
        "csv",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "index,value");
    assert_eq!(lines.count(), 81); // 3^4 eigenvalues
}

#[test]
fn report_lands_in_outfile() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, stdout, _) = run(&[
        "obc",
        "--model",
        "model1",
        "--set",
        r#"lattice={"kind":"open_chain","n":6}"#,
        "--set",
        "params.D=[1.0,0.0,1.0]",
        "--out",
        path.to_str().unwrap(),
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["report"]["degeneracy"], 1);
}
