//! Compiles a C client against the generated header and the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const CLIENT: &str = r#"
#include <stdio.h>
#include "ici.h"

int main(void) {
    IciScenario *s = NULL;
    if (ici_scenario_new("{\"users\": 20}", &s) != ICI_STATUS_OK) return 1;
    size_t k = 0;
    if (ici_ring_count(s, &k) != ICI_STATUS_OK || k == 0 || k > 64) return 2;
    double pmf[64];
    if (ici_location_pmf(s, ICI_SCHEME_GREEDY, 0, pmf, k) != ICI_STATUS_OK) return 3;
    double total = 0.0;
    for (size_t i = 0; i < k; i++) total += pmf[i];
    if (total < 0.999999 || total > 1.000001) return 4;
    double bits = 0.0;
    if (ici_capacity(s, ICI_SCHEME_ROUND_ROBIN, 0, &bits) != ICI_STATUS_OK || !(bits > 0.0)) return 5;
    if (ici_capacity(s, ICI_SCHEME_LOCATION_ROUND_ROBIN, 0, &bits) != ICI_STATUS_DOMAIN) return 6;
    char msg[128];
    if (ici_last_error_message(msg, sizeof msg) == 0) return 7;
    ici_scenario_free(s);
    printf("%s %.4f\n", ici_version(), bits);
    return 0;
}
"#;

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libici_ffi.a");
    lib.exists().then_some(lib)
}

fn compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

#[test]
fn c_client_links_and_runs() {
    let (Some(cc), Some(lib)) = (compiler(), static_lib()) else {
        eprintln!("skipping: no C compiler or static library");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let exe = dir.path().join("client");
    std::fs::write(&src, CLIENT).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to build");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "client exited with {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(env!("CARGO_PKG_VERSION")), "{text}");
}
