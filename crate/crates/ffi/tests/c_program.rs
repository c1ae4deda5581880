//! Compiles a small C program against the generated header and the shared
//! library and checks its output.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "igci.h"

int main(void) {
    double x[64], y[64];
    for (int i = 0; i < 64; i++) {
        x[i] = (double)((i * 29) % 64) / 63.0;
        y[i] = x[i] * x[i];
    }
    IgciPair *pair = NULL;
    if (igci_pair_new(x, y, 64, &pair) != IGCI_STATUS_OK) return 10;
    IgciReport rep;
    if (igci_score(pair, IGCI_REFERENCE_UNIFORM, IGCI_ESTIMATOR_ENTROPY, &rep) != IGCI_STATUS_OK) return 11;
    igci_pair_free(pair);
    IgciStatus s = igci_pair_new(x, y, 2, &pair);
    printf("%d %.17g %zu %d %s\n", (int)rep.direction, rep.c_xy, (size_t)rep.m_used, (int)s,
           igci_last_error_message() != NULL ? "msg" : "nomsg");
    return 0;
}
"#;

fn artifact_dir() -> PathBuf {
    // Integration test binaries live in target/<profile>/deps.
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib_dir = artifact_dir();
    assert!(
        lib_dir.join("libigci_ffi.so").exists() || lib_dir.join("libigci_ffi.dylib").exists(),
        "shared library not found in {}",
        lib_dir.display()
    );
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("main.c");
    let exe = tmp.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg(format!("-I{}", include.display()))
        .arg(format!("-L{}", lib_dir.display()))
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .arg("-ligci_ffi")
        .status()
        .expect("running the C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = text.split_whitespace().collect();

    let x: Vec<f64> = (0..64).map(|i| ((i * 29) % 64) as f64 / 63.0).collect();
    let y: Vec<f64> = x.iter().map(|v| v * v).collect();
    let want = igci::igci_score(
        &igci::SamplePair::new(x, y).unwrap(),
        igci::ReferenceFamily::UniformUnit,
        igci::EstimatorKind::EntropySpacing,
    )
    .unwrap();
    assert_eq!(fields[0], "1");
    assert_eq!(fields[1].parse::<f64>().unwrap(), want.c_xy);
    assert_eq!(fields[2].parse::<usize>().unwrap(), want.m_used);
    assert_eq!(fields[3], "3");
    assert_eq!(fields[4], "msg");
}
