use std::path::{Path, PathBuf};
use std::process::Command;

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn cc() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

/// Directory holding the cdylib: the parent of the `deps` directory this
/// test binary runs from.
fn lib_dir() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?.to_path_buf();
    let name = format!("{}pnlab_ffi{}", std::env::consts::DLL_PREFIX, std::env::consts::DLL_SUFFIX);
    dir.join(name).exists().then_some(dir)
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(manifest().join("include/pnlab.h")).unwrap();
    for sym in ["pnlab_group_parse", "pnlab_group_free", "pnlab_analyze", "typedef struct PnlabGroup PnlabGroup", "PNLAB_STATUS_NOT_PRIME"] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    let st = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(manifest().join("include"))
        .arg(manifest().join("tests/c/smoke.c"))
        .status()
        .unwrap();
    assert!(st.success());
}

#[test]
fn c_program_links_and_runs() {
    let (Some(cc), Some(dir)) = (cc(), lib_dir()) else {
        eprintln!("no C compiler or shared library, skipping");
        return;
    };
    let exe = std::env::temp_dir().join(format!("pnlab-smoke-{}", std::process::id()));
    let st = Command::new(&cc)
        .args(["-std=c99", "-I"])
        .arg(manifest().join("include"))
        .arg(manifest().join("tests/c/smoke.c"))
        .arg("-o")
        .arg(&exe)
        .arg(format!("-L{}", dir.display()))
        .args(["-lpnlab_ffi"])
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &dir).env("DYLD_LIBRARY_PATH", &dir).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "exit {:?}: {stdout}", out.status.code());
    assert!(stdout.contains("n=4 r=2 e=3 c=2 t=2 maximal=1"), "{stdout}");
    assert!(stdout.contains("error: 4 is not a prime"), "{stdout}");
    let _ = std::fs::remove_file(Path::new(&exe));
}
