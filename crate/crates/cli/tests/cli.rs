use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ffvault::vault::Vault;

const KEY: &str = "000102030405060708090a0b0c0d";

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn ffvault(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffvault"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn lock(out_path: &Path, extra: &[&str]) -> Output {
    let ls = data("locking_set.json");
    let fp = data("field_partition.json");
    let mut args = vec![
        "lock",
        "--key-hex",
        KEY,
        "--locking-set",
        ls.to_str().unwrap(),
        "--field-partition",
        fp.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    ffvault(&args)
}

fn unlock(vault: &Path, probes: &Path) -> Output {
    ffvault(&[
        "unlock",
        "--vault",
        vault.to_str().unwrap(),
        "--probe-set",
        probes.to_str().unwrap(),
        "--key-len",
        "14",
    ])
}

#[test]
fn lock_then_unlock() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.json");
    let out = lock(&v, &["--k", "8", "--r", "300", "--seed", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("r            300"));
    let vault = Vault::from_json(&std::fs::read_to_string(&v).unwrap()).unwrap();
    assert_eq!(vault.r(), 300);

    let out = unlock(&v, &data("locking_set.json"));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), KEY);
    assert!(stderr(&out).contains("matched=12"));
}

#[test]
fn r_above_q_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = lock(&dir.path().join("v.json"), &["--k", "8", "--r", "70000"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("r exceeds field size"));
}

#[test]
fn lock_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(code(&lock(&a, &["--k", "8", "--r", "250", "--seed", "9"])), 0);
    assert_eq!(code(&lock(&b, &["--k", "8", "--r", "250", "--seed", "9"])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn written_vaults_always_reparse() {
    let dir = tempfile::tempdir().unwrap();
    for i in 0..100u64 {
        let v = dir.path().join(format!("v{i}.json"));
        let k = (8 + i % 5).to_string();
        let r = (24 + i * 37 % 500).to_string();
        let rho = format!("{}", (i % 5) as f64 * 0.25);
        let seed = (i * 7919).to_string();
        let out = lock(&v, &["--k", &k, "--r", &r, "--rho", &rho, "--seed", &seed]);
        assert_eq!(code(&out), 0, "config {i}: {}", stderr(&out));
        let vault = Vault::from_json(&std::fs::read_to_string(&v).unwrap()).unwrap();
        assert_eq!(vault.r().to_string(), r);
    }
}

#[test]
fn empty_probe_file_is_null() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.json");
    assert_eq!(code(&lock(&v, &["--k", "8", "--r", "300"])), 0);
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let out = unlock(&v, &empty);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout(&out).trim(), "null");
    assert!(stderr(&out).contains("matched=0"));
}

#[test]
fn wrong_family_probes_are_null() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.json");
    assert_eq!(code(&lock(&v, &["--k", "8", "--r", "300"])), 0);
    let probes = dir.path().join("p.json");
    let elements: Vec<String> = (1000..1012).map(|e| e.to_string()).collect();
    std::fs::write(
        &probes,
        format!(
            r#"{{"q": 65537, "subsets": [{{"elements": [{}], "family": "gaussian", "spreads": [0.5, 0.5]}}]}}"#,
            elements.join(", ")
        ),
    )
    .unwrap();
    let out = unlock(&v, &probes);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("matched=0"));
}

#[test]
fn corrupted_vault_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.json");
    assert_eq!(code(&lock(&v, &["--k", "8", "--r", "300"])), 0);
    let text = std::fs::read_to_string(&v).unwrap();
    std::fs::write(&v, text.replacen("\"r\": 300", "\"r\": 299", 1)).unwrap();
    let out = unlock(&v, &data("locking_set.json"));
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("schema"));

    std::fs::write(&v, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&unlock(&v, &data("locking_set.json"))), 2);
}

#[test]
fn missing_file_is_io_error() {
    let out = unlock(Path::new("/nonexistent/vault.json"), &data("locking_set.json"));
    assert_eq!(code(&out), 1);
}

#[test]
fn unknown_flag_is_rejected() {
    assert_eq!(code(&ffvault(&["analyze", "--preset", "movie-k16-t20", "--bogus"])), 2);
}

#[test]
fn analyze_preset_surfaces_claims() {
    let out = ffvault(&["analyze", "--preset", "movie-k16-t20"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("125-bit"));
    assert!(text.contains("DISCREPANCY"));
    assert_eq!(code(&ffvault(&["analyze", "--preset", "nope"])), 2);
}

#[test]
fn explicit_params_match_preset() {
    let preset = ffvault(&["analyze", "--preset", "movie-k18-t22", "--format", "json"]);
    let explicit = ffvault(&[
        "analyze", "--q", "10000", "--k", "18", "--r", "10000", "--t", "22", "--t-mfj", "22",
        "--m-a", "1", "--m-f", "1", "--format", "json",
    ]);
    assert_eq!(code(&explicit), 0, "{}", stderr(&explicit));
    let p: serde_json::Value = serde_json::from_slice(&preset.stdout).unwrap();
    let e: serde_json::Value = serde_json::from_slice(&explicit.stdout).unwrap();
    for field in ["log2_n", "log2_family_bound", "attacker_prob", "security_bits"] {
        assert_eq!(p["reports"][0][field], e["reports"][0][field], "{field}");
    }
}

#[test]
fn missing_parameter_is_validation_error() {
    let out = ffvault(&[
        "analyze", "--q", "7", "--k", "1", "--r", "3", "--t", "1", "--t-mfj", "1", "--m-a", "1",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("m-f"));
}

#[test]
fn selftest_and_injected_faults() {
    let ok = ffvault(&["selftest"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    let crc = ffvault(&["selftest", "--inject-fault", "crc"]);
    assert_ne!(code(&crc), 0);
    assert!(stdout(&crc).contains("FAIL crc-check-value"));
    let census = ffvault(&["selftest", "--inject-fault", "census"]);
    assert_ne!(code(&census), 0);
    assert!(stdout(&census).contains("FAIL census-subsample"));
}

#[test]
fn minutiae_demo_runs() {
    let f = data("minutiae.txt");
    let out = ffvault(&["minutiae-demo", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("6d696e75746961652064656d6f21"));
    let out = ffvault(&["minutiae-demo", "--input", f.to_str().unwrap(), "--jitter", "10"]);
    assert_eq!(code(&out), 3);
}
