//! Compiles a C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "rdwlab.h"

int main(void) {
    double chi = 0.0;
    if (rdw_chi_square_2x2(4, 10, 10, 4, &chi, NULL) != RDW_STATUS_OK) return 1;
    if (fabs(chi - 5.143) > 1e-3) return 2;

    RdwAttentionParams params = rdw_attention_params_default();
    RdwController *ctrl = NULL;
    if (rdw_controller_new(&params, 1.0, 1.4, &ctrl) != RDW_STATUS_OK) return 3;
    rdw_controller_trigger(ctrl, NULL);
    double gain = 0.0;
    for (int i = 0; i < 8; ++i) rdw_controller_step(ctrl, 0.0, 1.0 / 90.0, &gain);
    rdw_controller_free(ctrl);
    if (gain != 1.4) return 4;

    RdwFit *fit = NULL;
    double gains[3] = {0.9, 1.0, 1.1};
    uint64_t n[3] = {10, 10, 10};
    uint64_t k[3] = {0, 0, 0};
    if (rdw_fit(gains, n, k, 3, NULL, &fit) != RDW_STATUS_FIT_DEGENERATE) return 5;
    if (rdw_last_error_message() == NULL) return 6;
    printf("ok %.3f\n", chi);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // CARGO_TARGET_TMPDIR is <target>/tmp
    PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .parent()
        .unwrap()
        .to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let profile = if cfg!(debug_assertions) {
        "debug"
    } else {
        "release"
    };
    let lib = target_dir().join(profile).join("librdwlab_ffi.a");
    if !lib.exists() {
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "rdwlab-ffi", "--lib"])
            .args(if profile == "release" {
                vec!["--release"]
            } else {
                vec![]
            })
            .status()
            .unwrap();
        assert!(status.success());
    }
    let work = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c_abi");
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    let exe = work.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok 5.143");
}
