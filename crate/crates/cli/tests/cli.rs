use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn smhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smhd")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn config(name: &str) -> String {
    configs().join(name).to_str().unwrap().to_string()
}

#[test]
fn classify_exit_codes() {
    let o = smhd(&["classify", "--input", &config("continuous_pair.json")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["kind"], "Continuous");

    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"plus":{"h":1,"v":[0,0],"b":[0,0]},"minus":{"h":2,"v":[0,0],"b":[0,0]},"front":{"slope":0,"speed":0}}"#,
    );
    let o = smhd(&["classify", "--input", &bad]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["kind"], "Inadmissible");

    let junk = write(&dir, "junk.json", "{ not json");
    let o = smhd(&["classify", "--input", &junk]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn empty_input_prints_usage() {
    let o = smhd(&["classify", "--input", ""]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).to_lowercase().contains("usage"));
}

#[test]
fn shock_exit_codes() {
    let args = |r: &str| smhd(&["shock", "--h-minus", "1", "--ratio", r, "--b1-plus", "0.5"]);
    let o = args("2");
    assert_eq!(code(&o), 0);
    let b = stdout_json(&o);
    assert!((b["setup"]["d0"].as_f64().unwrap() - 1.625).abs() < 1e-14);

    let o = args("0.5");
    assert_eq!(code(&o), 2);
    let b = stdout_json(&o);
    assert!(b["setup"].is_null());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Lax violated"));

    let o = args("1");
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn shock_bundle_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = smhd(&["shock", "--h-minus", "1", "--ratio", "2", "--b1-plus", "0.5", "--out", out]);
    assert_eq!(code(&o), 0);
    let bundle = dir.path().join("shock.json");
    let bundle = bundle.to_str().unwrap();

    let o = smhd(&["classify", "--input", bundle]);
    assert_eq!(code(&o), 0);
    let c = stdout_json(&o);
    assert_eq!(c["kind"], "Shock");
    assert_eq!(c["lax"]["k"], 1);

    let o = smhd(&["stability", "shock", "--input", bundle]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["froude_window"]["satisfied"], true);
}

#[test]
fn cvs_fixture() {
    let o = smhd(&["stability", "cvs", "--input", &config("cvs_pair.json")]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["choice"]["lambda_plus"].as_f64(), Some(0.25));
    assert_eq!(r["sufficient"]["tag"], "SufficientlyStable");
}

#[test]
fn simulate_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg: Value =
        serde_json::from_str(&std::fs::read_to_string(configs().join("rational_shock_1d.json")).unwrap()).unwrap();

    let mut bad = cfg.clone();
    bad["cells"] = serde_json::json!([0, 1]);
    let o = smhd(&["simulate", "--input", &write(&dir, "bad.json", &bad.to_string())]);
    assert_eq!(code(&o), 1);

    let mut fast = cfg;
    fast["fixed_dt"] = serde_json::json!(0.5);
    let o = smhd(&["simulate", "--input", &write(&dir, "fast.json", &fast.to_string())]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn simulate_reports_drift_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = smhd(&["simulate", "--input", &config("rational_shock_1d.json"), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    let drift = r["summary"]["max_front_drift"].as_f64().unwrap();
    assert!(drift < 2.0 * r["dx"][0].as_f64().unwrap());
    assert!(String::from_utf8_lossy(&o.stderr).contains("front drift"));
    for f in ["series.csv", "snapshot.csv", "summary.json"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
}

#[test]
fn degenerate_sweep_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        &dir,
        "sweep.json",
        r#"{"verdict":"cvs-nsc","x":{"param":"jump_v2","min":-1,"max":1,"samples":2},"y":{"param":"b2_plus","min":0,"max":1,"samples":2}}"#,
    );
    let o = smhd(&["sweep", "--input", &spec]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout.clone()).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,y,verdict,code,margin");
    assert_eq!(lines.len(), 5);

    let o = smhd(&["sweep", "--input", &spec, "--format", "svg"]);
    let svg = String::from_utf8(o.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));

    let a = smhd(&["sweep", "--input", &config("lax_sweep.json")]).stdout;
    let b = smhd(&["sweep", "--input", &config("lax_sweep.json")]).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
