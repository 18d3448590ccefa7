use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn psturm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psturm"))
        .args(args)
        .current_dir(configs())
        .env_remove("PSTURM_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn generate_writes_fifty_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let o = psturm(&["generate", "--spec", "fib.toml", "--start", "0", "--len", "50", "--out", out.to_str().unwrap()]);
    stdout(&o);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("index,symbol,value"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 50);
    assert_eq!(rows[0][0], "0");
    assert_eq!(rows[49][0], "49");
    assert!(text.contains("alpha = [4181, 6765]"));
}

#[test]
fn trace_table_columns_agree() {
    let o = psturm(&["trace-table", "--spec", "simple3.toml", "--energy", "0.0", "--k", "6", "--format", "csv"]);
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 7);
    for r in rows {
        let d: f64 = r[1].parse().unwrap();
        let h: f64 = r[2].parse().unwrap();
        assert!((d - h).abs() <= 1e-8 * d.abs().max(1.0), "{r:?}");
    }
}

#[test]
fn spectrum_matches_golden_file() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/spectrum_simple3_level4.json");
    let got = stdout(&psturm(&["spectrum", "--spec", "simple3.toml", "--level", "4"]));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden, &got).unwrap();
    }
    let want = std::fs::read_to_string(&golden).expect("golden file; regenerate with UPDATE_GOLDEN=1");
    assert_eq!(got, want);
}

#[test]
fn seeded_gordon_scan_is_reproducible() {
    let args = ["gordon-scan", "--spec", "simple3.toml", "--energies", "3", "--origins", "30", "--seed", "7"];
    let a = stdout(&psturm(&args));
    let b = stdout(&psturm(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["result"]["classified"], 90);
    assert_eq!(v["result"]["falsification_candidates"].as_array().unwrap().len(), 0);
    assert_eq!(v["config"]["output"]["seed"], 7);
    assert!(v["version"].is_string());
}

#[test]
fn sparse_check_at_zero() {
    let o = psturm(&["sparse-check", "--spec", "sparse.toml", "--energy", "0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["c_e"].as_f64(), Some(1.0));
}

#[test]
fn complexity_and_lyapunov_run() {
    let o = psturm(&["complexity", "--spec", "fib.toml", "--n-max", "4", "--t-max", "20", "--window", "500"]);
    let rows = data_rows(&stdout(&o));
    let p: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(p, ["2", "3", "4", "5"]);
    let o = psturm(&["lyapunov", "--spec", "simple3.toml", "--e-min", "5", "--e-max", "6", "--energies", "2", "--n-steps", "2000"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["result"]["estimates"][0]["gamma"].as_f64().unwrap() > 0.1);
}

#[test]
fn validation_errors_exit_one() {
    let cases: [&[&str]; 4] = [
        &["generate", "--spec", "fib.toml", "--bogus"],
        &["spectrum", "--spec", "fib.toml"],
        &["generate", "--spec", "missing.toml"],
        &["sparse-check", "--spec", "sparse.toml", "--energy", "3"],
    ];
    for args in cases {
        let o = psturm(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.starts_with("error"), "{err}");
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_psturm"))
        .args(["generate", "--spec", "fib.toml"])
        .current_dir(configs())
        .env("PSTURM_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_carries_an_example() {
    for sub in ["generate", "complexity", "spectrum", "lyapunov", "gordon-scan", "sparse-check", "trace-table"] {
        let o = psturm(&[sub, "--help"]);
        assert!(stdout(&o).contains("Example:"), "{sub}");
    }
}
