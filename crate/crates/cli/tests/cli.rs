//! End-to-end exercises of the `moebius` binary: the exit-code contract,
//! the file pipeline between subcommands, and the failure witnesses.

use std::path::Path;
use std::process::{Command, Output};

use moebius_core::{line_space, space_to_json, tree_to_json, Tree};
use num_rational::BigRational;
use num_traits::FromPrimitive;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moebius"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code present")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("write input file");
    path.to_string_lossy().into_owned()
}

/// Runs a subcommand with `--format json` and extracts one payload from the
/// report so it can be fed to the next subcommand as an input document.
fn json_payload(args: &[&str], pointer: &str) -> (Output, String) {
    let mut full = args.to_vec();
    full.extend_from_slice(&["--format", "json"]);
    let output = run(&full);
    let report: serde_json::Value =
        serde_json::from_str(&stdout(&output)).expect("report is valid JSON");
    let payload = report
        .pointer(pointer)
        .unwrap_or_else(|| panic!("report has no {pointer} payload"));
    let text = serde_json::to_string_pretty(payload).expect("payload serializes");
    (output, text)
}

fn line_space_file(dir: &Path) -> String {
    let space = line_space(&[0, 1, 3, 7])
        .with_remote_point("w")
        .expect("remote point is fresh");
    write_file(dir, "space.json", &space_to_json(&space))
}

fn five_leaf_tree_file(dir: &Path) -> String {
    let edge = |a: &str, b: &str, len: i64| {
        (
            a.to_string(),
            b.to_string(),
            BigRational::from_i64(len).expect("integer length"),
        )
    };
    let tree = Tree::from_edges(
        "r",
        &[
            edge("r", "a", 1),
            edge("r", "b", 2),
            edge("a", "c", 1),
            edge("a", "l1", 3),
            edge("c", "l2", 1),
            edge("c", "l3", 2),
            edge("b", "l4", 1),
            edge("b", "l5", 5),
        ],
    )
    .expect("tree builds");
    write_file(dir, "tree.json", &tree_to_json(&tree))
}

#[test]
fn validate_and_reconstruct_roundtrip_exit_zero() {
    let dir = TempDir::new().expect("tempdir");
    let space = line_space_file(dir.path());

    let validated = run(&["validate", "--input", &space]);
    assert_eq!(code(&validated), 0, "stderr: {}", stderr(&validated));

    let (assigned, table) =
        json_payload(&["moebius", "--input", &space], "/details/table");
    assert_eq!(code(&assigned), 0, "stderr: {}", stderr(&assigned));
    let table = write_file(dir.path(), "table.json", &table);

    let checked = run(&["submoebius-check", "--input", &table]);
    assert_eq!(code(&checked), 0, "stderr: {}", stderr(&checked));

    let (rebuilt, space_back) = json_payload(
        &["reconstruct", "--input", &table, "--scale", "0,1,w"],
        "/details/space",
    );
    assert_eq!(code(&rebuilt), 0, "stderr: {}", stderr(&rebuilt));
    let original: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&space).expect("read space"))
            .expect("space JSON");
    let returned: serde_json::Value =
        serde_json::from_str(&space_back).expect("payload JSON");
    assert_eq!(original, returned, "reconstruction must return the input space");
}

#[test]
fn detection_pipeline_reports_a_witness_with_exit_one() {
    let dir = TempDir::new().expect("tempdir");
    let tree = five_leaf_tree_file(dir.path());

    let (built, model) =
        json_payload(&["hyperbolic", "build", "--input", &tree], "/details/model");
    assert_eq!(code(&built), 0, "stderr: {}", stderr(&built));
    let model = write_file(dir.path(), "model.json", &model);

    let (noisy, table) = json_payload(
        &[
            "hyperbolic", "perturb", "--input", &model, "--eps", "1/8", "--seed", "7",
        ],
        "/details/table",
    );
    assert_eq!(code(&noisy), 0, "stderr: {}", stderr(&noisy));
    let table = write_file(dir.path(), "noisy.json", &table);

    let (averaged, avg_table) = json_payload(
        &["hyperbolic", "symmetrize", "--input", &table],
        "/details/table",
    );
    assert_eq!(code(&averaged), 0, "stderr: {}", stderr(&averaged));
    let avg_table = write_file(dir.path(), "averaged.json", &avg_table);

    let verdict = run(&["is-moebius", "--input", &avg_table]);
    assert_eq!(code(&verdict), 1, "the averaged table is not a Moebius structure");
    let text = stdout(&verdict);
    assert!(text.contains("witness:"), "a failing check names a witness: {text}");
    assert!(
        text.contains("exp(263363/65536)") && text.contains("exp(791387/196608)"),
        "seeded noise pins the witness values: {text}"
    );
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = TempDir::new().expect("tempdir");
    let space = line_space_file(dir.path());
    let tree = five_leaf_tree_file(dir.path());
    let garbled = write_file(dir.path(), "garbled.json", "{\"points\": [");
    let missing = dir.path().join("absent.json");
    let missing = missing.to_string_lossy();

    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["validate", "--input", &missing], "unreadable file"),
        (vec!["validate", "--input", &garbled], "invalid JSON"),
        (vec!["validate", "--input", &tree], "wrong document kind"),
        (vec!["validate"], "missing input"),
        (
            vec!["validate", "--input", &space, "--input", &space],
            "too many inputs",
        ),
        (
            vec!["reconstruct", "--input", &space],
            "missing required --scale",
        ),
        (
            vec!["reconstruct", "--input", &space, "--scale", "0,1,zzz"],
            "unknown scale label",
        ),
        (vec!["frobnicate"], "unknown subcommand"),
    ];
    for (args, what) in cases {
        let output = run(&args);
        assert_eq!(code(&output), 2, "{what} must exit 2: {}", stderr(&output));
        assert!(
            !stderr(&output).trim().is_empty(),
            "{what} must explain itself on stderr"
        );
    }
}

#[test]
fn precondition_violations_exit_three() {
    let dir = TempDir::new().expect("tempdir");
    let space = line_space_file(dir.path());
    let tree = five_leaf_tree_file(dir.path());
    let (_, model) =
        json_payload(&["hyperbolic", "build", "--input", &tree], "/details/model");
    let model = write_file(dir.path(), "model.json", &model);
    let (_, mul_table) =
        json_payload(&["moebius", "--input", &space], "/details/table");
    let mul_table = write_file(dir.path(), "table.json", &mul_table);

    let cases: Vec<(Vec<&str>, &str)> = vec![
        (
            vec!["reconstruct", "--input", &space, "--scale", "0,0,w"],
            "repeated scale labels",
        ),
        (
            vec!["hyperbolic", "perturb", "--input", &model, "--eps", "-1/8"],
            "negative noise amplitude",
        ),
        (
            vec!["hyperbolic", "symmetrize", "--input", &mul_table],
            "symmetrize needs a log-scale table",
        ),
        (
            vec!["hyperbolic", "deviation", "--input", &mul_table, "--input", &mul_table],
            "deviation needs log-scale inputs",
        ),
    ];
    for (args, what) in cases {
        let output = run(&args);
        assert_eq!(code(&output), 3, "{what} must exit 3: {}", stderr(&output));
        assert!(
            !stderr(&output).trim().is_empty(),
            "{what} must explain itself on stderr"
        );
    }
}

#[test]
fn failed_mathematical_checks_exit_one() {
    let dir = TempDir::new().expect("tempdir");
    let space = line_space_file(dir.path());

    let mut bent: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(&space).expect("read space"),
    )
    .expect("space JSON");
    bent["matrix"][1][2] = serde_json::Value::String("3".into());
    bent["matrix"][2][1] = serde_json::Value::String("3".into());
    let bent = write_file(dir.path(), "bent.json", &serde_json::to_string(&bent).unwrap());

    let differ = run(&["equivalent", "--input", &space, "--input", &bent]);
    assert_eq!(code(&differ), 1, "changed distances break equivalence");
    assert!(
        stdout(&differ).contains("assignments differ at tuple"),
        "equivalence failure names a tuple: {}",
        stdout(&differ)
    );

    let mut lopsided: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(&space).expect("read space"),
    )
    .expect("space JSON");
    lopsided["matrix"][1][2] = serde_json::Value::String("5".into());
    let lopsided = write_file(
        dir.path(),
        "lopsided.json",
        &serde_json::to_string(&lopsided).unwrap(),
    );
    let invalid = run(&["validate", "--input", &lopsided]);
    assert_eq!(code(&invalid), 1, "an asymmetric matrix fails validation");
    assert!(
        stdout(&invalid).contains("violation:"),
        "validation failure lists violations: {}",
        stdout(&invalid)
    );
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"][..], &["topology", "--help"][..]] {
        let output = run(args);
        assert_eq!(code(&output), 0, "{args:?} is not an error");
    }
}
