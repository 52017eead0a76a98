//! End-to-end tests of the `massey` binary: golden outputs, schema
//! validation, exit codes, and file round-trips.

mod common;

use std::process::{Command, Output};

use common::{golden_path, load_schema, validate_schema};

fn massey_cmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_massey"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = massey_cmd(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn assert_golden(args: &[&str], golden: &str, schema: &str) {
    let out = stdout_of(args);
    let expected = std::fs::read_to_string(golden_path(golden)).expect("golden file");
    assert_eq!(out.trim_end(), expected.trim_end(), "golden mismatch for {args:?}");
    let value: serde_json::Value = serde_json::from_str(&out).expect("json output");
    validate_schema(&value, &load_schema(schema)).expect("schema-valid output");
}

#[test]
fn golden_complex_triple() {
    assert_golden(
        &["massey", "iwasawa_complex", "--classes", "[phi1],[phi1],[phi2]", "--json"],
        "massey_complex_triple.json",
        "verdict.schema.json",
    );
}

#[test]
fn golden_quadruple_over_q() {
    assert_golden(
        &["massey", "quadruple@-1", "--classes", "[x],[y],[y],[x]", "--json"],
        "massey_quadruple_q.json",
        "verdict.schema.json",
    );
}

#[test]
fn golden_quadruple_over_gauss() {
    assert_golden(
        &[
            "massey",
            "quadruple@-1",
            "--classes",
            "[x],[y],[y],[x]",
            "--adjoin-sqrt",
            "-1",
            "--json",
        ],
        "massey_quadruple_gauss.json",
        "verdict.schema.json",
    );
}

#[test]
fn golden_remark_mixed_product() {
    assert_golden(
        &[
            "massey",
            "iwasawa_real",
            "--classes",
            "[eta1],[eta3*eta4],[eta2]",
            "--json",
        ],
        "massey_remark_mixed.json",
        "verdict.schema.json",
    );
}

#[test]
fn golden_truncated_degree_one() {
    assert_golden(
        &[
            "massey",
            "iwasawa_truncated",
            "--classes",
            "[eta1],[2*eta1],[eta1]",
            "--json",
        ],
        "massey_truncated_degree_one.json",
        "verdict.schema.json",
    );
}

#[test]
fn golden_cohomology() {
    assert_golden(
        &["cohomology", "iwasawa_real", "--degree", "1", "--json"],
        "cohomology_iwasawa_h1.json",
        "cohomology.schema.json",
    );
    assert_golden(
        &["cohomology", "quadruple@-1", "--degree", "8", "--json"],
        "cohomology_quadruple_h8.json",
        "cohomology.schema.json",
    );
}

#[test]
fn golden_truncate_dump() {
    let dir = tempdir();
    let out = dir.join("b.json");
    let status = massey_cmd(&["truncate", "iwasawa_real", "3", "-o", out.to_str().unwrap()]);
    assert!(status.status.success());
    let written = std::fs::read_to_string(&out).unwrap();
    let expected =
        std::fs::read_to_string(golden_path("dump_iwasawa_truncated.json")).unwrap();
    assert_eq!(written.trim_end(), expected.trim_end());
    let value: serde_json::Value = serde_json::from_str(&written).unwrap();
    validate_schema(&value, &load_schema("structure.schema.json")).expect("dump schema");
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("massey-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn text_output_mentions_witness() {
    let out = stdout_of(&[
        "massey",
        "quadruple@-1",
        "--classes",
        "[x],[y],[y],[x]",
        "--adjoin-sqrt",
        "-1",
    ]);
    assert!(out.contains("trivial: yes"));
    assert!(out.contains("= s"));
}

#[test]
fn check_command_and_exit_codes() {
    let ok = massey_cmd(&["check", "iwasawa_real"]);
    assert!(ok.status.success());

    let unknown = massey_cmd(&["check", "no_such_corpus_entry"]);
    assert_eq!(unknown.status.code(), Some(1));

    let usage = massey_cmd(&["massey", "iwasawa_real"]);
    assert_eq!(usage.status.code(), Some(1), "missing --classes is a usage error");

    let dir = tempdir();
    let bad = dir.join("bad.dga");
    std::fs::write(&bad, "field rationals\ngenerators\n  x : 2\n  w : 7\ndifferentials\n  w = x\n")
        .unwrap();
    let parse = massey_cmd(&["check", bad.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&parse.stderr);
    assert!(msg.contains("6:"), "degree mismatch carries a position: {msg}");
}

#[test]
fn not_closed_class_is_rejected() {
    let out = massey_cmd(&["massey", "iwasawa_real", "--classes", "[eta5],[eta1],[eta2]"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not closed"));
}

#[test]
fn dumps_round_trip_through_the_cli() {
    let dir = tempdir();
    let b = dir.join("truncated.json");
    assert!(massey_cmd(&["truncate", "iwasawa_real", "3", "-o", b.to_str().unwrap()])
        .status
        .success());
    // the dump is accepted wherever a file is: run a degree-one product on it
    let out = stdout_of(&[
        "massey",
        b.to_str().unwrap(),
        "--classes",
        "[eta1],[3*eta1],[-2*eta1]",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["trivial"], "yes");

    let ext = dir.join("extended.json");
    assert!(massey_cmd(&[
        "extend",
        "heisenberg_squared",
        "--adjoin-sqrt",
        "-1",
        "-o",
        ext.to_str().unwrap()
    ])
    .status
    .success());
    let coh = stdout_of(&["cohomology", ext.to_str().unwrap(), "--degree", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&coh).unwrap();
    assert_eq!(v["dimension"], 4);

    let dual = dir.join("dual.json");
    assert!(massey_cmd(&[
        "dualize",
        b.to_str().unwrap(),
        "-o",
        dual.to_str().unwrap()
    ])
    .status
    .success());
    assert!(massey_cmd(&["check", dual.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&dual).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    validate_schema(&value, &load_schema("structure.schema.json")).expect("dual dump schema");
}

#[test]
fn search_height_env_is_honored() {
    let bad = Command::new(env!("CARGO_BIN_EXE_massey"))
        .args(["massey", "iwasawa_real", "--classes", "[eta1],[eta1],[eta1]"])
        .env("MASSEY_SEARCH_HEIGHT", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));

    let ok = Command::new(env!("CARGO_BIN_EXE_massey"))
        .args(["massey", "iwasawa_real", "--classes", "[eta1],[eta1],[eta1]", "--json"])
        .env("MASSEY_SEARCH_HEIGHT", "3")
        .output()
        .unwrap();
    assert!(ok.status.success());
}

#[test]
fn document_round_trip_via_serializer() {
    // serialize each free corpus algebra and re-parse it
    for id in ["iwasawa_real", "iwasawa_complex", "heisenberg_squared", "quadruple"] {
        let dga = massey::corpus::build(id, None).unwrap();
        let text = massey::dsl::serialize_document(&dga).unwrap();
        let again = massey::dsl::parse_document(&text).unwrap();
        assert!(dga == again, "{id} document round-trip failed");
    }
}
