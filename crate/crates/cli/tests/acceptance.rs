//! Acceptance criterion 9: the built-in pipeline's JSON report is
//! byte-identical across repeated runs and across thread counts.

use std::process::{Command, Output};

fn run_demo(extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moebius"))
        .args(["demo", "--format", "json"])
        .args(extra)
        .output()
        .expect("binary runs")
}

#[test]
fn ac9_demo_json_is_byte_identical_across_runs_and_jobs() {
    let baseline = run_demo(&[]);
    let rerun = run_demo(&[]);
    let serial = run_demo(&["--jobs", "1"]);
    let wide = run_demo(&["--jobs", "8"]);

    let all_pass = [&baseline, &rerun, &serial, &wide]
        .iter()
        .all(|o| o.status.code() == Some(0));
    let identical = baseline.stdout == rerun.stdout
        && baseline.stdout == serial.stdout
        && baseline.stdout == wide.stdout;
    let versioned = String::from_utf8_lossy(&baseline.stdout).contains("\"schema_version\": 1");

    let pass = all_pass && identical && versioned;
    println!(
        "AC9: {} — demo --format json: {} bytes, exit 0 on all four runs: {}, \
         byte-identical across a rerun and --jobs 1/8: {identical}",
        if pass { "PASS" } else { "FAIL" },
        baseline.stdout.len(),
        all_pass,
    );
    assert!(all_pass, "demo must exit 0 on every run");
    assert!(identical, "demo JSON must not depend on run or thread count");
    assert!(versioned, "the JSON envelope must carry schema_version 1");
}
