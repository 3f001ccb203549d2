use std::path::PathBuf;
use std::process::Command;

use pnlab::catalog;
use pnlab::cli::run;

fn fixture_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pnlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.pg"));
    std::fs::write(&path, catalog::fixture(name).unwrap().to_text()).unwrap();
    path
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pnlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn pnlab(args: &[&str]) -> pnlab::cli::Outcome {
    run(std::iter::once("pnlab").chain(args.iter().copied()))
}

#[test]
fn analyze_f2_porcelain() {
    let f = fixture_path("sec4ex1_p3_r2");
    let out = pnlab(&["analyze", f.to_str().unwrap(), "--porcelain"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout,
        "n=4 r=2 e=3 c=2 d=2 s=3 t=2 maximal_tail=true pn=true powerful=true strongly_powerful=true\n"
    );
    let again = pnlab(&["--porcelain", "analyze", f.to_str().unwrap()]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn analyze_cites_bounds() {
    let f = fixture_path("sec4ex1_p3_r3");
    let out = pnlab(&["analyze", f.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    for key in ["rank bound", "exponent bound", "p-th power length", "tail bound", "class witness"] {
        assert!(out.stdout.contains(key), "{key}");
    }
    assert!(!out.stdout.contains("VIOLATED"));
}

#[test]
fn count_example() {
    let out = pnlab(&["count", "--p", "3", "--n", "4", "--x", "1"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "P 4 1 3 = 3^1\n");
}

#[test]
fn census_coclass_one() {
    let out = pnlab(&["census", "--p", "3", "--coclass", "1", "--porcelain"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "classes=2");
    assert_eq!(lines.len(), 3);
}

#[test]
fn negatives_exit_one() {
    let m27 = fixture_path("m27");
    assert_eq!(pnlab(&["series", m27.to_str().unwrap()]).code, 1);
    assert_eq!(pnlab(&["tail", m27.to_str().unwrap()]).code, 1);
    let bad = write_tmp("bad.pg", "p 3\nrank 2\norders 3 1\ncomm 2 1 1^3\n");
    let out = pnlab(&["consistency", bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("inconsistent"));
    let a = fixture_path("sec2ex1_n7");
    let b = fixture_path("sec2ex1_n8");
    assert_eq!(pnlab(&["iso", a.to_str().unwrap(), b.to_str().unwrap()]).code, 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pnlab(&["frobnicate"]).code, 2);
    assert_eq!(pnlab(&["analyze"]).code, 2);
    assert_eq!(pnlab(&["count", "--p", "3", "--n", "4", "--bogus"]).code, 2);
    assert_eq!(pnlab(&["analyze", "/nonexistent/file.pg"]).code, 2);
    let bad = write_tmp("notprime.pg", "p 4\nrank 1\norders 1\n");
    assert_eq!(pnlab(&["analyze", bad.to_str().unwrap()]).code, 2);
}

#[test]
fn descendant_and_iso() {
    let g = fixture_path("sec2ex2_p3_n4");
    let out = pnlab(&["descendant", g.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let d = write_tmp("desc.pg", &out.stdout);
    let h = fixture_path("sec2ex2_p3_n3");
    let iso = pnlab(&["iso", d.to_str().unwrap(), h.to_str().unwrap(), "--porcelain"]);
    assert_eq!(iso.code, 0);
    assert_eq!(iso.stdout, "isomorphic=yes\n");
}

#[test]
fn growth_porcelain_is_stable() {
    let a = pnlab(&["growth", "--n", "40", "--porcelain"]);
    let b = pnlab(&["growth", "--n", "40", "--porcelain"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.starts_with("n=40 "));
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_pnlab");
    let f = fixture_path("sec4ex1_p3_r2");
    let ok = Command::new(exe).args(["analyze", "--porcelain"]).arg(&f).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("maximal_tail=true"));
    let usage = Command::new(exe).arg("--nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
