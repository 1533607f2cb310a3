use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floquet-bands"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn run_env(dir: &Path, args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floquet-bands"))
        .current_dir(dir)
        .env("FLOQUET_BANDS_THREADS", threads)
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn csv(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_hermitian_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--potential", "cos(2*x)", "--e-range", "-1:10", "--n", "100"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv(&dir.path().join("verify.csv"));
    assert!(header.starts_with("E,re_delta,im_delta,conj_residual,"));
    assert_eq!(rows.len(), 101);
    let max = rows.last().unwrap();
    assert_eq!(max[0], "max");
    assert!(max[2..].iter().all(|v| f(v) <= 1e-9), "{max:?}");
}

#[test]
fn verify_pt_lattice_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["verify", "--potential", "cos(2*x)+0.45i*sin(2*x)", "--e-range", "-1:10", "--n", "100", "--format", "json"],
    );
    assert_eq!(code(&o), 0);
    let v = json(&dir.path().join("verify.json"));
    assert_eq!(v["passed"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 100);
    assert!(v["max"]["residuals"]["conj_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn verify_rejects_non_pt_potential_before_integrating() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--potential", "cos(2*x)+i*cos(2*x)", "--e-range", "-1:10", "--n", "100"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("validation"));
    assert!(!dir.path().join("verify.csv").exists());
}

// The discrete scheme keeps the PT identities to rounding even at 16 steps,
// so the failing path is exercised with an unreachable tolerance.
#[test]
fn verify_exits_three_when_residuals_exceed_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("strict.json"), r#"{"tol_identity": 1e-30}"#).unwrap();
    let o = run(
        dir.path(),
        &["verify", "--config", "strict.json", "--preset", "pt-lattice", "--v0", "0.45", "--n", "20"],
    );
    assert_eq!(code(&o), 3);
    let (_, rows) = csv(&dir.path().join("verify.csv"));
    assert!(rows.last().unwrap()[3..].iter().any(|v| f(v) > 1e-30));
}

#[test]
fn free_particle_bands() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["bands", "--preset", "free", "--e-range", "0:25", "--n", "101"]);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv(&dir.path().join("bands.csv"));
    assert_eq!(header, "band,lower,upper,gap_above,coalesced");
    let expect = [(0.0, 1.0), (1.0, 4.0), (4.0, 9.0), (9.0, 16.0), (16.0, 25.0)];
    assert_eq!(rows.len(), expect.len());
    for (r, (lo, hi)) in rows.iter().zip(expect) {
        assert!((f(&r[1]) - lo).abs() <= 1e-8 && (f(&r[2]) - hi).abs() <= 1e-8, "{r:?}");
    }
    for r in &rows[..4] {
        assert!(f(&r[3]) == 0.0 && r[4] == "true", "{r:?}");
    }
    assert_eq!(rows[4][3], "");
    let (scan_header, scan) = csv(&dir.path().join("bands_scan.csv"));
    assert_eq!(scan_header, "E,re_delta,im_delta,re_k,im_k,conj_residual,wronskian_drift");
    assert_eq!(scan.len(), 101);
}

#[test]
fn mathieu_bands_agree_with_hill_compare() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["bands", "--preset", "mathieu"])), 0);
    assert_eq!(code(&run(dir.path(), &["hill-compare", "--preset", "mathieu"])), 0);
    let (_, bands) = csv(&dir.path().join("bands.csv"));
    assert!(f(&bands[0][3]) > 0.5 && bands[0][4] == "false");
    let (header, hill) = csv(&dir.path().join("hill_compare.csv"));
    assert_eq!(header, "k,band,floquet_energy,hill_re,hill_im,abs_error");
    assert_eq!(hill.len(), 48);
    let at = |k: &str, band: &str| {
        f(&hill.iter().find(|r| r[0] == k && r[1] == band).unwrap()[3])
    };
    assert!((f(&bands[0][1]) - at("0", "1")).abs() <= 1e-7);
    assert!((f(&bands[0][2]) - at("1", "1")).abs() <= 1e-7);
    assert!((f(&bands[1][1]) - at("1", "2")).abs() <= 1e-7);
    assert!((f(&bands[1][2]) - at("0", "2")).abs() <= 1e-7);
}

// cos 2x + i·v0·sin 2x has the spectrum of sqrt(1 - v0²)·cos 2x for v0 < 1,
// so the first gap stays open at v0 = 0.6 and closes beyond v0 = 1.
#[test]
fn pt_lattice_gap_closes_beyond_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let args = |v0: &'static str, out: &'static str| {
        ["bands", "--preset", "pt-lattice", "--v0", v0, "--e-range", "-1:6", "--format", "json", "--out", out]
    };
    assert_eq!(code(&run(dir.path(), &args("0.6", "a.json"))), 0);
    assert_eq!(code(&run(dir.path(), &args("1.2", "b.json"))), 0);
    let a = json(&dir.path().join("a.json"));
    assert_eq!(a["bands"][0]["coalesced"], false);
    let b = json(&dir.path().join("b.json"));
    assert_eq!(b["bands"][0]["coalesced"], true);
    assert_eq!(b["bands"][0]["exceptional"], true);
    assert!(b["edges"].as_array().unwrap().iter().any(|e| e["kind"] == "merged"));
}

#[test]
fn hill_compare_presets() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["hill-compare", "--preset", "free", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&dir.path().join("hill_compare.json"));
    assert!(v["max_error"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["rows"].as_array().unwrap().len(), 48);
    let o = run(dir.path(), &["hill-compare", "--preset", "pt-lattice", "--v0", "0.3"]);
    assert_eq!(code(&o), 0);
    let o = run(dir.path(), &["hill-compare", "--preset", "pt-lattice", "--v0", "1.2"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.json"),
        r#"{"potential": "cos(2*x)", "e_min": 0, "e_max": 4, "n_samples": 9, "output_path": "cfg.csv"}"#,
    )
    .unwrap();
    assert_eq!(code(&run(dir.path(), &["bands", "--config", "run.json"])), 0);
    assert_eq!(csv(&dir.path().join("cfg_scan.csv")).1.len(), 9);
    assert_eq!(code(&run(dir.path(), &["bands", "--config", "run.json", "--n", "5", "--preset", "free"])), 0);
    let (_, scan) = csv(&dir.path().join("cfg_scan.csv"));
    assert_eq!(scan.len(), 5);
    assert!((f(&scan[4][1]) - 1.0).abs() <= 1e-12);
}

#[test]
fn usage_and_config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), r#"{"potential": "0", "colour": "red"}"#).unwrap();
    for args in [
        &["bands"][..],
        &["bands", "--preset", "free", "--potential", "0"],
        &["bands", "--preset", "mathieu", "--v0", "0.3"],
        &["bands", "--preset", "free", "--e-range", "3:1"],
        &["bands", "--preset", "free", "--steps", "15"],
        &["bands", "--preset", "nope"],
        &["bands", "--potential", "cos(2*x"],
        &["bands", "--config", "missing.json"],
        &["bands", "--config", "bad.json"],
        &["bands", "--preset", "free", "--out", "no/such/dir/b.csv"],
        &["explode"],
    ] {
        assert_eq!(code(&run(dir.path(), args)), 1, "{args:?}");
    }
    assert_eq!(code(&run_env(dir.path(), &["bands", "--preset", "free"], "many")), 1);
}

#[test]
fn outputs_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let files = ["b.csv", "b_scan.csv"];
    let mut seen: Vec<Vec<Vec<u8>>> = Vec::new();
    for threads in ["1", "4", "0"] {
        let o = run_env(dir.path(), &["bands", "--preset", "pt-lattice", "--v0", "0.45", "--n", "120", "--out", "b.csv"], threads);
        assert_eq!(code(&o), 0);
        seen.push(files.iter().map(|f| fs::read(dir.path().join(f)).unwrap()).collect());
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]));
}
