use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "nsd.h"

int main(void) {
    NsdIndexSet *s = NULL;
    bool in_filter = false;
    if (nsd_index_set_from_json("{\"period\":2,\"residues\":[0]}", &s) != NSD_STATUS_OK) return 10;
    if (nsd_index_set_decide(s, 0, &in_filter) != NSD_STATUS_OK || !in_filter) return 11;
    nsd_index_set_free(s);

    NsdFamily *f = NULL;
    char *grade = NULL;
    if (nsd_family_from_json("{\"kind\":\"builtin\",\"name\":\"in_star\"}", &f) != NSD_STATUS_OK) return 12;
    if (nsd_family_classify(f, 0, &grade) != NSD_STATUS_OK) return 13;
    int ok = strcmp(grade, "strictly_weak") == 0;
    nsd_string_free(grade);
    nsd_family_free(f);
    if (!ok) return 14;

    if (nsd_family_from_json("{\"kind\":", &f) != NSD_STATUS_PARSE) return 15;
    if (nsd_last_error_message() == NULL) return 16;
    puts("ok");
    return 0;
}
"#;

fn static_lib() -> Option<PathBuf> {
    let deps = std::env::current_exe().ok()?.parent()?.to_path_buf();
    let lib = deps.parent()?.join("libnsd_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_compiles_and_links() {
    let Some(lib) = static_lib() else {
        eprintln!("libnsd_ffi.a not found next to the test binary; skipping link step");
        return;
    };
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("nsd_smoke.c");
    let exe = dir.join("nsd_smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("cc available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
