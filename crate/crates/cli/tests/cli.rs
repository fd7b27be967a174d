use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bogomolov"))
        .args(args)
        .output()
        .expect("run bogomolov")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn family_file(f: u32) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join(format!("../core/data/families/{f:03}.pc"))
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    let ok = bin(&["check", &family_file(16)]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("consistent"));

    let bad = bin(&["check", &data("bad_rhs.pc")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("[g2,g1]"));

    let missing = bin(&["check", &data("does-not-exist.pc")]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn b0_report_endings() {
    for (f, last) in [
        (1, "B0(G) = 1"),
        (16, "B0(G) = C2"),
        (30, "B0(G) = C2 x C2"),
    ] {
        let o = bin(&["b0", "--family", &f.to_string()]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert_eq!(text.trim_end().lines().last(), Some(last), "family {f}");
    }
    let text = stdout(&bin(&["b0", "--family", "16"]));
    assert!(text.contains("We add 12 tails."));
}

#[test]
fn b0_from_file_matches_family() {
    let by_file: serde_json::Value =
        serde_json::from_slice(&bin(&["b0", &family_file(30), "--format", "json"]).stdout).unwrap();
    let by_family: serde_json::Value =
        serde_json::from_slice(&bin(&["b0", "--family", "30", "--format", "json"]).stdout).unwrap();
    assert_eq!(by_file["b0"], by_family["b0"]);
    assert_eq!(by_file["hnf"], by_family["hnf"]);
}

#[test]
fn unknown_family_is_rejected() {
    assert_eq!(bin(&["b0", "--family", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["b0", "--family", "116"]).status.code(), Some(2));
}

#[test]
fn json_is_deterministic() {
    let a = bin(&["b0", "--family", "30", "--format", "json"]);
    let b = bin(&["b0", "--family", "30", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["freeRank"], 7);
    assert_eq!(v["b0"], serde_json::json!(["2", "2"]));
}

#[test]
fn schur_reports() {
    let klein = stdout(&bin(&["schur", &data("klein.pc")]));
    assert!(klein.trim_end().ends_with("M(G) = C2"), "{klein}");
    let cyclic = stdout(&bin(&["schur", "--family", "1"]));
    assert!(cyclic.trim_end().ends_with("M(G) = 1"), "{cyclic}");
    let f16 = stdout(&bin(&["schur", "--family", "16"]));
    assert!(f16.contains("|B0| divides |M(G)|"));
}

#[test]
fn corpus_csv_and_out() {
    let o = bin(&["corpus", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 116);
    assert!(lines[0].starts_with("family,"));
    let families: Vec<u32> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(families, (1..=115).collect::<Vec<_>>());

    let path = std::env::temp_dir().join(format!("bogomolov-corpus-{}.txt", std::process::id()));
    let o = bin(&["corpus", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.contains("115/115 families match"));
}

#[test]
fn oracle_mode_flag() {
    let o = bin(&[
        "b0",
        "--family",
        "16",
        "--mode",
        "oracle-all-pairs",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let d = bin(&["b0", "--family", "16", "--format", "json"]);
    let a: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&d.stdout).unwrap();
    assert_eq!(a["hnf"], b["hnf"]);
    assert_ne!(
        bin(&["b0", "--family", "16", "--mode", "fast"])
            .status
            .code(),
        Some(0)
    );
}
