//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "idealstat.h"

int main(void) {
    IdealstatSet *set = NULL;
    if (idealstat_set_from_json("{\"kind\":\"intervals\",\"gen\":\"factorial\"}", &set) != IDEALSTAT_STATUS_OK) return 10;
    uint64_t c = 0;
    if (idealstat_set_count(set, 720, &c) != IDEALSTAT_STATUS_OK || c != 103) return 11;
    IdealstatConfig *cfg = NULL;
    if (idealstat_config_new(1000000, &cfg) != IDEALSTAT_STATUS_OK) return 12;
    IdealstatIdeal *ideal = NULL;
    if (idealstat_ideal_parse("zeta", &ideal) != IDEALSTAT_STATUS_OK) return 13;
    int32_t v = -1;
    char *report = NULL;
    if (idealstat_ideal_decide(ideal, set, cfg, &v, &report) != IDEALSTAT_STATUS_OK) return 14;
    if (v != IDEALSTAT_NEGATIVE || strstr(report, "certified-out") == NULL) return 15;
    idealstat_string_free(report);
    if (idealstat_config_new(5, &cfg) != IDEALSTAT_STATUS_VALIDATION) return 16;
    if (strlen(idealstat_last_error()) == 0) return 17;
    idealstat_ideal_free(ideal);
    idealstat_set_free(set);
    puts("ok");
    return 0;
}
"#;

fn staticlib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("libidealstat_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = staticlib() else {
        eprintln!("static library not built; skipping");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("main.c");
    let bin = tmp.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let out = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "cc failed: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/idealstat.h")).unwrap();
    for f in [
        "idealstat_set_from_json",
        "idealstat_ideal_decide",
        "idealstat_converge",
        "idealstat_last_error",
        "typedef struct IdealstatSet IdealstatSet",
    ] {
        assert!(h.contains(f), "{f}");
    }
}
