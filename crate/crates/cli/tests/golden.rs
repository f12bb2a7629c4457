//! Golden-file tests for the JSON reports. Regenerate with `UPDATE_GOLDEN=1`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gtm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtm"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check_golden(name: &str, args: &[&str]) {
    let out = gtm(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let path = golden_dir().join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &stdout).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(stdout, expected, "{name} differs from its golden file");
}

#[test]
fn golden_reports() {
    let cases: &[(&str, &[&str])] = &[
        ("gen_thue_morse", &["gen", "specs/thue-morse.toml", "--mode", "both", "--count", "16"]),
        ("gen_stride", &["gen", "specs/alternating.toml", "--N", "3", "--l", "5", "--count", "12"]),
        ("classify_thue_morse", &["classify", "specs/thue-morse.toml"]),
        ("classify_periodic", &["classify", "specs/periodic.toml"]),
        ("classify_alternating", &["classify", "specs/alternating.toml", "--scan", "256"]),
        ("classify_window", &["classify", "specs/window.toml"]),
        ("stammer_thue_morse", &["stammer", "specs/thue-morse.toml", "--N", "1", "--l", "2"]),
        ("kernel_alternating", &["kernel", "specs/alternating.toml"]),
        ("kernel_window", &["kernel", "specs/window.toml"]),
        ("eval_thue_morse", &["eval", "specs/thue-morse.toml", "--beta", "2"]),
        ("eval_periodic", &["eval", "specs/periodic.toml", "--beta", "3", "--digits", "6", "--N", "1", "--l", "2"]),
        ("cf_thue_morse", &["cf", "specs/thue-morse.toml", "--depth", "12"]),
        ("gap_3_2_2", &["gap", "3", "2", "2"]),
        ("gap_pair", &["gap", "12", "6", "1", "--t2", "3"]),
    ];
    for (name, args) in cases {
        check_golden(name, args);
    }
}

#[test]
fn text_examples() {
    let out = gtm(&["--format", "text", "gen", "specs/thue-morse.toml", "--mode", "both", "--count", "8"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "01101001 AGREE\n");
    let out = gtm(&["--format", "text", "gen", "specs/zero.toml", "--count", "5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "00000\n");
    let out = gtm(&["--format", "text", "eval", "specs/zero.toml", "--beta", "2", "--digits", "8"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0.00000000\n");
}

#[test]
fn classify_status_key() {
    let out = gtm(&["classify", "specs/thue-morse.toml"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["status"], "NonPeriodic");
    assert_eq!(doc["command"], "classify");
    assert!(doc["version"].is_string());
}

#[test]
fn digit_and_morphic_agree_on_ten_thousand_terms() {
    for spec in ["thue-morse", "periodic", "alternating", "zero"] {
        let path = format!("specs/{spec}.toml");
        let out = gtm(&["gen", &path, "--mode", "both", "--count", "10000"]);
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["result"]["agree"], true, "{spec}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", "specs/thue-morse.toml", "--scan", "1024"];
    let one = gtm(&[&args[..], &["--jobs", "1"]].concat());
    let four = gtm(&[&args[..], &["--jobs", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| gtm(args).status.code();
    assert_eq!(code(&["gen"]), Some(2));
    assert_eq!(code(&["gen", "specs/missing.toml"]), Some(3));
    assert_eq!(code(&["stammer", "specs/periodic.toml"]), Some(4));
    assert_eq!(code(&["gen", "specs/window.toml", "--count", "20"]), Some(5));
    assert_eq!(code(&["kernel", "specs/window.toml"]), Some(0));
    let budget = Command::new(env!("CARGO_BIN_EXE_gtm"))
        .args(["gen", "specs/thue-morse.toml", "--mode", "morphic", "--count", "200"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env("GTM_MAX_TERMS", "100")
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(6));
    assert_eq!(code(&["eval", "specs/periodic.toml", "--beta", "2"]), Some(1));
}

#[test]
fn parse_errors_are_positioned() {
    let dir = std::env::temp_dir().join(format!("gtm-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    std::fs::write(&path, "L = 2\nk = 2\npreperiod = 0\nperiod = 1\nkappa = [[5]]\n").unwrap();
    let out = gtm(&["gen", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.toml:5:"), "{err}");
    std::fs::remove_dir_all(&dir).ok();
}
