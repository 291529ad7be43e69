use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn fri2d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fri2d")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn dirac_experiment_is_reproducible() {
    let dir = tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = fri2d(&["experiment", "dirac", "--out-dir", p(out)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ra = std::fs::read(a.join("report.json")).unwrap();
    assert_eq!(ra, std::fs::read(b.join("report.json")).unwrap());
    assert_eq!(std::fs::read(a.join("trials.csv")).unwrap(), std::fs::read(b.join("trials.csv")).unwrap());

    let report: Value = serde_json::from_slice(&ra).unwrap();
    assert!(report["mse_db"].as_f64().unwrap() <= -200.0);
    assert!(report.get("runtime_seconds").is_none());
    assert_eq!(report["trials"].as_array().unwrap().len(), 10);
    let timing: Value = serde_json::from_slice(&std::fs::read(a.join("timing.json")).unwrap()).unwrap();
    assert!(timing["runtime_seconds"].as_f64().unwrap() >= 0.0);
    let csv = std::fs::read_to_string(a.join("trials.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 10 * 4);
}

#[test]
fn seed_flag_changes_the_draw() {
    let dir = tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(code(&fri2d(&["experiment", "dirac", "--trials", "2", "--out-dir", p(&a)])), 0);
    assert_eq!(code(&fri2d(&["experiment", "dirac", "--trials", "2", "--seed", "9", "--out-dir", p(&b)])), 0);
    assert_ne!(std::fs::read(a.join("trials.csv")).unwrap(), std::fs::read(b.join("trials.csv")).unwrap());
}

#[test]
fn stage_commands_chain() {
    let dir = tempdir().unwrap();
    let samples = dir.path().join("s/samples.csv");
    let spectrum = dir.path().join("s/spectrum.csv");
    let est = dir.path().join("s/estimate.json");
    assert_eq!(code(&fri2d(&["sample", "--trial", "3", "--out", p(&samples)])), 0);
    assert!(samples.with_extension("json").exists());
    assert_eq!(code(&fri2d(&["spectrum", "--samples", p(&samples), "--out", p(&spectrum)])), 0);
    let o = fri2d(&["estimate", "--spectrum", p(&spectrum), "--pulses", "4", "--out", p(&est)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let meta: Value = serde_json::from_slice(&std::fs::read(samples.with_extension("json")).unwrap()).unwrap();
    let truth = meta["provenance"]["pulses"].as_array().unwrap();
    let record: Value = serde_json::from_slice(&std::fs::read(&est).unwrap()).unwrap();
    let found = record["locations"].as_array().unwrap();
    assert_eq!(found.len(), truth.len());
    for t in truth {
        let (x, y) = (t["x"].as_f64().unwrap(), t["y"].as_f64().unwrap());
        let best = found
            .iter()
            .map(|l| (l[0].as_f64().unwrap() - x).hypot(l[1].as_f64().unwrap() - y))
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-8, "pulse ({x}, {y}) missed by {best}");
    }
}

#[test]
fn kernel_export_writes_a_table() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("k.csv");
    let o = fri2d(&["kernel", "--family", "separable", "--half", "2", "--r1", "2", "--points", "11", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,y,re,im");
    assert_eq!(text.lines().count(), 1 + 11 * 11);
}

#[test]
fn alias_check_reports_json() {
    let o = fri2d(&["check-alias", "--half", "3"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], Value::Bool(true));
    assert!(v["worst_zero_violation_relative"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn undersampling_exits_with_configuration_code() {
    let o = fri2d(&["check-alias", "--half", "3", "--oversampling", "0.5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn malformed_config_exits_with_configuration_code() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{\"kind\": \"dirac\", \"pulses\": }").unwrap();
    assert_eq!(code(&fri2d(&["experiment", "dirac", "--config", p(&cfg), "--out-dir", p(dir.path())])), 2);

    std::fs::write(&cfg, serde_json::to_string(&serde_json::json!({"kind": "dirac", "bogus": 1})).unwrap()).unwrap();
    assert_eq!(code(&fri2d(&["experiment", "dirac", "--config", p(&cfg), "--out-dir", p(dir.path())])), 2);

    assert_eq!(code(&fri2d(&["spectrum", "--samples", p(&dir.path().join("missing.csv")), "--out", "x.csv"])), 2);
}

#[test]
fn degenerate_spectrum_exits_with_numerical_code() {
    let dir = tempdir().unwrap();
    let spectrum = dir.path().join("zero.csv");
    let mut csv = String::from("k1,k2,re,im\n");
    for a in -2..=2 {
        for b in -2..=2 {
            csv.push_str(&format!("{a},{b},0,0\n"));
        }
    }
    std::fs::write(&spectrum, csv).unwrap();
    let meta = serde_json::json!({"grid": {"k1": [-2, 2], "k2": [-2, 2], "omega0x": 3.0, "omega0y": 3.0}});
    std::fs::write(spectrum.with_extension("json"), meta.to_string()).unwrap();
    let o = fri2d(&["estimate", "--spectrum", p(&spectrum), "--pulses", "2"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}
