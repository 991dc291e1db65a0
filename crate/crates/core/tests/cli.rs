use std::path::PathBuf;
use std::process::Command;

use holoshannon::report::RunReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_holoshannon"))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn run_to(dir: &tempfile::TempDir, name: &str, file: &str) -> (i32, RunReport, String) {
    let out = dir.path().join(file);
    let status = bin()
        .args(["run", "--scenario"])
        .arg(scenario(name))
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    (status.code().unwrap(), serde_json::from_str(&text).unwrap(), text)
}

#[test]
fn ground_scenario_report() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report, _) = run_to(&dir, "ground.toml", "ground.json");
    assert_eq!(code, 0);
    assert_eq!(report.metric("h_total_bits"), Some(63.0));
    let gap = report.check("matches_continuum_gap").unwrap();
    assert!(gap.passed);
}

#[test]
fn momentum_scenario_triples_ground_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report, _) = run_to(&dir, "momentum.toml", "momentum.json");
    assert_eq!(code, 0);
    assert_eq!(report.metric("replicas"), Some(2.0));
    assert_eq!(report.metric("h_total_bits"), Some(3.0 * 63.0));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (_, _, a) = run_to(&dir, "momentum.toml", "a.json");
    let (_, _, b) = run_to(&dir, "momentum.toml", "b.json");
    assert_eq!(a, b);
}

#[test]
fn malformed_config_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "seed = 1\n[geometry]\nl = 64.0\n").unwrap();
    let out = dir.path().join("never.json");
    let status = bin()
        .args(["run", "--scenario"])
        .arg(&bad)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    assert!(!out.exists());

    let text = std::fs::read_to_string(scenario("ground.toml"))
        .unwrap()
        .replace("eps = 1.0", "eps = -1.0");
    std::fs::write(&bad, text).unwrap();
    let output = bin().args(["run", "--scenario"]).arg(&bad).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(output.stdout.is_empty());
    assert!(String::from_utf8_lossy(&output.stderr).contains("geometry.eps"));
}

#[test]
fn relativistic_fluid_fails_but_runs_the_rest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fast.toml");
    let text = std::fs::read_to_string(scenario("ground.toml"))
        .unwrap()
        .replace("u = 0.0", "u = 0.7");
    std::fs::write(&path, text).unwrap();
    let out = dir.path().join("fast.json");
    let status = bin()
        .args(["run", "--scenario"])
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(!report.check("regime").unwrap().passed);
    assert!(report.check("entropy_identity").unwrap().passed);
}

fn sweep_column(param: &str, values: &str, column: &str) -> Vec<f64> {
    let output = bin()
        .args(["sweep", "--scenario"])
        .arg(scenario("ground.toml"))
        .args(["--param", param, "--values", values])
        .output()
        .unwrap();
    // Exit code 1 only means some row failed a check; the table is complete.
    assert!(matches!(output.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&output.stderr));
    let text = String::from_utf8(output.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == column).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn sweep_over_interval_length() {
    let dev = sweep_column("geometry.l", "16,64,256,1024", "continuum_deviation");
    assert_eq!(dev.len(), 4);
    assert!(dev.windows(2).all(|w| w[1] < w[0]), "{dev:?}");
}

#[test]
fn sweep_over_velocity_is_quadratic() {
    let action = sweep_column("fluid.u", "0,0.02,0.05", "action");
    assert_eq!(action[0], 0.0);
    let ratio = action[2] / action[1];
    assert!((ratio - 6.25).abs() / 6.25 < 0.01, "{ratio}");
}

#[test]
fn single_value_sweep_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let (_, report, _) = run_to(&dir, "ground.toml", "g.json");
    let h = sweep_column("geometry.l", "64", "h_total_bits");
    assert_eq!(h, vec![report.metric("h_total_bits").unwrap()]);
    let c = sweep_column("geometry.l", "64", "conjecture_residual");
    assert_eq!(c, vec![report.metric("conjecture_residual").unwrap()]);
}

#[test]
fn unknown_sweep_parameter_is_a_config_error() {
    let status = bin()
        .args(["sweep", "--param", "geometry.width", "--values", "1"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(status.stdout.is_empty());
}

#[test]
fn check_subcommand_prints_every_criterion() {
    let output = bin().arg("check").output().unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 10, "{text}");
    assert_eq!(output.status.code(), Some(0));
}
