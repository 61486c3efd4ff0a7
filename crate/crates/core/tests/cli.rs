use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qme")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qme-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs").join(name).to_string_lossy().into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn ground_decay_follows_exponential() {
    let out = scratch("decay");
    let res = qme(&["run", &config("ground_decay.json"), "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let (header, rows) = read_csv(&out.join("decay.csv"));
    assert_eq!(header, ["time", "p_e", "p_g", "purity"]);
    for row in &rows {
        assert!((row[1] - (-row[0]).exp()).abs() < 1e-6);
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["invariants_pass"], true);
    assert!(manifest["runtime_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let a = scratch("det-a");
    let b = scratch("det-b");
    let cfg = config("theta_sweep.json");
    assert!(qme(&["run", &cfg, "--out", a.to_str().unwrap(), "--jobs", "1"]).status.success());
    assert!(qme(&["run", &cfg, "--out", b.to_str().unwrap(), "--jobs", "3"]).status.success());
    let csv_a = fs::read(a.join("theta_sweep.csv")).unwrap();
    assert_eq!(csv_a, fs::read(b.join("theta_sweep.csv")).unwrap());
    let (_, rows) = read_csv(&a.join("theta_sweep.csv"));
    let thetas: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    assert!(thetas.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn schema_errors_exit_with_two() {
    let dir = scratch("schema");
    let bad = dir.join("bad.json");
    fs::write(&bad, r#"{"bath": {"preset": "ground", "n": 1}, "subsystems": [{"kind": "qubit"}], "rates": [1.0], "initial_state": {"preset": "vacuum"}, "integrator": {"t_end": 1.0}, "colour": 3}"#).unwrap();
    let res = qme(&["run", bad.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&res.stderr);
    assert!(msg.contains("colour") && msg.contains("line"), "{msg}");

    fs::write(&bad, r#"{"bath": {"preset": "ground", "n": 2}, "subsystems": [{"kind": "qubit"}, {"kind": "qubit"}], "rates": [1.0, 1.0], "initial_state": {"preset": "theta", "theta": 2.0}, "integrator": {"t_end": 1.0}}"#).unwrap();
    let res = qme(&["run", bad.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("initial_state.theta"));
}

#[test]
fn physics_errors_exit_with_three() {
    let dir = scratch("physics");
    let cfg = dir.join("coarse.json");
    fs::write(&cfg, r#"{"bath": {"preset": "ground", "n": 1}, "subsystems": [{"kind": "qubit"}], "rates": [1.0], "initial_state": {"preset": "labels", "labels": "e"}, "integrator": {"t_end": 1.0, "dt": 0.5}}"#).unwrap();
    let res = qme(&["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3), "{}", String::from_utf8_lossy(&res.stderr));
}

#[test]
fn table1_preset_writes_one_row_per_entry() {
    let out = scratch("table1");
    let res = qme(&["preset", "table1", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let (header, rows) = read_csv(&out.join("table1.csv"));
    assert_eq!(rows.len(), 14);
    assert!(header.iter().any(|h| h == "pt_0"));
    let manifest = fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"name\": \"table1\""));
}

#[test]
fn fig3_preset_has_entanglement_and_purity() {
    let out = scratch("fig3");
    assert!(qme(&["preset", "fig3", "--out", out.to_str().unwrap()]).status.success());
    let (header, rows) = read_csv(&out.join("fig3.csv"));
    assert!(header.contains(&"ln_steady".to_string()) && header.contains(&"purity_steady".to_string()));
    assert_eq!(rows.len(), 91);
}

#[test]
fn unknown_preset_is_rejected_by_the_parser() {
    let res = qme(&["preset", "fig9"]);
    assert_eq!(res.status.code(), Some(2));
}
