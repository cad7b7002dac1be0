use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qotto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qotto"))
        .args(args)
        .env_remove("QOTTO_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    let body = rdr
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, body)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn classify_single_qubit_engine() {
    let out = qotto(&["classify", "--model", "single", "--th", "15", "--wh", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "Engine");
    assert_eq!(v["converged"], true);
    let l = &v["ledger"];
    assert!(l["Q_h"].as_f64().unwrap() > 0.0);
    assert!(l["Q_c"].as_f64().unwrap() < 0.0);
    assert!(l["W"].as_f64().unwrap() < 0.0);
    assert!((v["metrics"]["efficiency"].as_f64().unwrap() - 0.5).abs() < 1e-2);
    assert_eq!(v["parameters"]["T_h"], 15.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("kind=Engine"));
}

#[test]
fn max_power_tracks_the_linear_relation() {
    let out = qotto(&["max-power", "--model", "single", "--temp-ratios", "2:3.5:0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, body) = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(body.len(), 4);
    let (ci, cj) = (column(&h, "temp_ratio"), column(&h, "argmax_level"));
    for r in &body {
        let x: f64 = r[ci].parse().unwrap();
        let y: f64 = r[cj].parse().unwrap();
        assert!((y - 0.5 * (1.0 + x)).abs() <= 0.1, "T_h/T_c={x}: argmax {y}");
        assert_eq!(r[column(&h, "kind")], "Engine");
        assert_eq!(r[column(&h, "boundary_max")], "false");
    }
}

#[test]
fn verify_passes_on_this_build() {
    let out = qotto(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 2000);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("measurement_equivalence: 1000 passed, 0 failed"));
    assert!(err.contains("liouvillian_properties: 1000 passed, 0 failed"));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const SWEEP_CONFIG: &str = r#"
model = "21"

[temperatures]
hot = 15.0
cold = 5.0

[levels]
g = 0.4

[scan]
axis1 = "omega1_c:1:3:0.25"
axis2 = "g:0.1:0.5:0.2"
"#;

#[test]
fn same_config_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SWEEP_CONFIG);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = |out: &Path, workers: &str| {
        let o = qotto(&["--config", &cfg, "--workers", workers, "sweep", "-o", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    };
    run(&a, "1");
    run(&b, "3");
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);

    let (h, body) = rows(std::str::from_utf8(&a).unwrap());
    assert_eq!(body.len(), 9 * 3);
    // every row carries the full parameter set
    for name in ["model", "T_h", "T_c", "omega_h", "omega_c", "omega2", "g", "kappa", "omega_ct", "t_h", "t_c"] {
        let c = column(&h, name);
        assert!(body.iter().all(|r| !r[c].is_empty()), "{name}");
    }
    assert!(body.iter().all(|r| r[0] == "21"));
    assert_eq!(body[0][column(&h, "T_h")], "1.5000000000000000e1");
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "model = \"12\"\n[levels]\ng = 0.3\nomega1_c = 2.5\n[temperatures]\nhot = 15.5\n");
    let v = json(&qotto(&["--config", &cfg, "classify"]));
    assert_eq!(v["model"], "12");
    assert_eq!(v["parameters"]["g"], 0.3);
    let v = json(&qotto(&["--config", &cfg, "classify", "--g", "0.55"]));
    assert_eq!(v["parameters"]["g"], 0.55);
    assert_eq!(v["parameters"]["T_h"], 15.5);
    assert_eq!(v["kind"], "Engine");
}

#[test]
fn output_path_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("result.json");
    let cfg = write(dir.path(), "c.toml", &format!("output = {:?}\n", target.to_str().unwrap()));
    let out = qotto(&["--config", &cfg, "classify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["model"], "single");
}

#[test]
fn validation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write(dir.path(), "typo.toml", "[bath]\nkapa = 0.01\n");
    let bad_model = write(dir.path(), "m.toml", "model = \"13\"\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["--config", "/definitely/missing.toml", "classify"],
        vec!["--config", &typo, "classify"],
        vec!["--config", &bad_model, "classify"],
        vec!["classify", "--kappa", "-1"],
        vec!["classify", "--tc", "0"],
        vec!["classify", "--model", "12", "--g", "0"],
        vec!["sweep"],
        vec!["sweep", "--axis1", "omega1_c:3:1:0.5"],
        vec!["sweep", "--axis1", "omega1_c:1:3:0.5", "--budget", "2"],
        vec!["max-power", "--model", "single", "--over", "g"],
        vec!["--workers", "0", "classify"],
        vec!["classify", "-o", "/nonexistent/dir/out.json"],
        vec!["classify", "--bogus"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = qotto(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "), "{args:?}");
    }
}

#[test]
fn workers_env_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_qotto"))
        .args(["classify"])
        .env("QOTTO_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("QOTTO_WORKERS"));
}

#[test]
fn universal_nonconvergence_exits_2() {
    let out = qotto(&["classify", "--max-iterations", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["converged"], false);
    assert_eq!(v["status"], "nonconverged");
    assert!(v["ledger"]["Q_h"].is_number());

    let out = qotto(&["sweep", "--max-iterations", "1", "--axis1", "omega_ratio:1.5:2.5:0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let (h, body) = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(body.len(), 3);
    assert!(body.iter().all(|r| r[column(&h, "converged")] == "false"));
}

#[test]
fn partial_nonconvergence_is_data() {
    // N grows with ω₁ᶜ for model 11, so a small cap splits the scan
    let out = qotto(&["sweep", "--model", "11", "--g", "0.4", "--max-iterations", "3", "--axis1", "omega1_c:1:12:1"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, body) = rows(&String::from_utf8(out.stdout).unwrap());
    let c = column(&h, "converged");
    assert!(body.iter().any(|r| r[c] == "true"));
    assert!(body.iter().any(|r| r[c] == "false"));
}

#[test]
fn mpr_fit_from_a_max_power_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("mp.csv");
    let out = qotto(&["max-power", "--temp-ratios", "2:3.5:0.5", "-o", table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let fitted = json(&qotto(&["mpr-fit", "--input", table.to_str().unwrap()]));
    let scanned = json(&qotto(&["mpr-fit"]));
    assert_eq!(fitted, scanned);
    assert!((fitted["slope"].as_f64().unwrap() - 0.5).abs() <= 0.05);
    assert!((fitted["intercept"].as_f64().unwrap() - 0.5).abs() <= 0.1);

    let out = qotto(&["mpr-fit", "--temp-ratios", "2:2.5:0.5"]);
    assert_eq!(out.status.code(), Some(1), "two records are too few");
}

#[test]
fn coupling_scan_with_curves() {
    let dir = tempfile::tempdir().unwrap();
    let curves = dir.path().join("curves.csv");
    let out = qotto(&[
        "max-power", "--model", "12", "--over", "g", "--temp-ratios", "3:3:1", "--range", "0:1:0.1",
        "--curves", curves.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, body) = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(body.len(), 1);
    let g: f64 = body[0][column(&h, "argmax_g")].parse().unwrap();
    assert!(g > 0.0);
    let (ch, curve) = rows(&std::fs::read_to_string(curves).unwrap());
    assert_eq!(curve.len(), 11);
    // g = 0 is non-operational: zero power, no limit cycle
    assert_eq!(curve[0][column(&ch, "P")], "0.0000000000000000e0");
    assert_eq!(curve[0][column(&ch, "converged")], "false");
}
