//! End-to-end tests driving the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};

const CUSP_DOC: &str = r#"{
  "version": 1,
  "constellation": [
    {"id": "A0"},
    {"id": "A1", "parent": "A0"},
    {"id": "A2", "parent": "A1", "satellite": "A0"}
  ],
  "ideals": {
    "m": {"A0": 1},
    "J": {"A0": 2, "A1": 1, "A2": 1},
    "G": {"A0": 3, "A1": 1, "A2": 1}
  }
}
"#;

fn write_doc(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("zariski-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zariski"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn validate_reports_and_exit_codes() {
    let doc = write_doc("cusp.json", CUSP_DOC);
    let out = run(&["validate", "--input", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("constellation: valid"));

    let bad = write_doc(
        "bad-satellite.json",
        r#"{"version": 1, "constellation": [
            {"id": "A0"},
            {"id": "A1", "parent": "A0"},
            {"id": "B1", "parent": "A0"},
            {"id": "A2", "parent": "A1", "satellite": "B1"}
        ]}"#,
    );
    let out = run(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("satellite target B1"));

    let out = run(&["validate", "--input", "/definitely/not/a/file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn adjoint_prints_basis_and_factorization() {
    let doc = write_doc("cusp-adjoint.json", CUSP_DOC);
    let out = run(&["adjoint", "--input", doc.to_str().unwrap(), "--ideal", "J"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("basis: (1, 0, 0)"));
    assert!(text.contains("factorization: m"));

    let out = run(&[
        "adjoint",
        "--input",
        doc.to_str().unwrap(),
        "--ideal",
        "G",
        "--iterate",
        "2",
    ]);
    assert!(stdout(&out).contains("basis: (1, 0, 0)"));
}

#[test]
fn is_adjoint_exit_codes_match_the_mathematics() {
    let doc = write_doc("cusp-is-adjoint.json", CUSP_DOC);
    let yes = run(&[
        "is-adjoint",
        "--input",
        doc.to_str().unwrap(),
        "--ideal",
        "G",
        "--power",
        "1",
    ]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).contains("(4, 2, 2)"));

    let no = run(&[
        "is-adjoint",
        "--input",
        doc.to_str().unwrap(),
        "--ideal",
        "J",
        "--power",
        "1",
    ]);
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).contains("at A0"));
}

#[test]
fn gorenstein_culprit_report() {
    let doc = write_doc("cusp-gorenstein.json", CUSP_DOC);
    let out = run(&[
        "gorenstein",
        "--input",
        doc.to_str().unwrap(),
        "--ideal",
        "J",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("A0: 2 proximate base points"));

    let out = run(&[
        "gorenstein",
        "--input",
        doc.to_str().unwrap(),
        "--ideal",
        "G",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&[
        "min-adjoint-exponent",
        "--input",
        doc.to_str().unwrap(),
        "--ideal",
        "J",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "min-adjoint-exponent",
        "--input",
        doc.to_str().unwrap(),
        "--ideal",
        "G",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn invariants_and_factor() {
    let doc = write_doc("cusp-invariants.json", CUSP_DOC);
    let out = run(&[
        "invariants",
        "--input",
        doc.to_str().unwrap(),
        "--ideal",
        "J",
        "--format",
        "structured",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["order"], 2);
    assert_eq!(parsed["colength"], 5);
    assert_eq!(parsed["multiplicity"], 6);
    assert_eq!(parsed["generators"], 3);
    assert_eq!(parsed["minimal_multiplicity"], true);

    let out = run(&["factor", "--input", doc.to_str().unwrap(), "--ideal", "G"]);
    assert_eq!(stdout(&out).trim(), "m * p(A2)");
}

#[test]
fn two_factor_rejects_incomparable_branches() {
    let doc = write_doc(
        "branches.json",
        r#"{
  "version": 1,
  "constellation": [
    {"id": "A0"},
    {"id": "L", "parent": "A0"},
    {"id": "R", "parent": "A0"}
  ],
  "ideals": {
    "left": {"A0": 1, "L": 1},
    "right": {"A0": 1, "R": 1}
  }
}"#,
    );
    let out = run(&[
        "two-factor",
        "--input",
        doc.to_str().unwrap(),
        "--first",
        "left",
        "--second",
        "right",
        "--power",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("holds: false"));
}

#[test]
fn two_factor_routes_agree() {
    let doc = write_doc("cusp-two-factor.json", CUSP_DOC);
    let out = run(&[
        "two-factor",
        "--input",
        doc.to_str().unwrap(),
        "--first",
        "m",
        "--second",
        "J",
        "--power",
        "1",
        "--format",
        "structured",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["holds"], true);
    assert_eq!(parsed["shape_route"], true);
    assert_eq!(parsed["direct_route"], true);
}

#[test]
fn monomial_commands() {
    let out = run(&["monomial", "closure", "--gens", "x^2, y^3"]);
    assert_eq!(stdout(&out).trim(), "x^2, x*y^2, y^3");

    let out = run(&["monomial", "adjoint", "--gens", "x^2, y^3"]);
    assert_eq!(stdout(&out).trim(), "x, y");

    let out = run(&["monomial", "colength", "--gens", "x^2, x*y^2, y^3"]);
    assert_eq!(stdout(&out).trim(), "5");

    let out = run(&["monomial", "point-basis", "--gens", "x^2, x*y^2, y^3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"satellite\": \"A0\""));
    assert!(text.contains("\"A0\": 2"));

    // the emitted document feeds straight back into the other commands
    let doc = write_doc("emitted.json", &text);
    let out = run(&["adjoint", "--input", doc.to_str().unwrap(), "--ideal", "I"]);
    assert!(stdout(&out).contains("factorization: m"));

    let out = run(&["monomial", "point-basis", "--gens", "x^2, y^3"]);
    assert_eq!(out.status.code(), Some(2), "open staircases are rejected");
}

#[test]
fn export_dot_shapes() {
    let doc = write_doc("cusp-dot.json", CUSP_DOC);
    let out = run(&[
        "export-dot",
        "--input",
        doc.to_str().unwrap(),
        "--ideal",
        "J",
    ]);
    let text = stdout(&out);
    assert_eq!(text.matches("->").count(), 3);
    assert_eq!(text.matches("dashed").count(), 1);
    assert!(text.contains("A0:2(0)"));
}

#[test]
fn structured_output_is_json() {
    let doc = write_doc("cusp-structured.json", CUSP_DOC);
    for args in [
        vec!["validate"],
        vec!["factor", "--ideal", "J"],
        vec!["adjoint", "--ideal", "J"],
        vec!["is-adjoint", "--ideal", "G"],
        vec!["gorenstein", "--ideal", "G"],
        vec!["invariants", "--ideal", "J"],
        vec!["intersection"],
    ] {
        let mut full = args.clone();
        let path = doc.to_str().unwrap();
        full.extend_from_slice(&["--input", path, "--format", "structured"]);
        let out = run(&full);
        let text = stdout(&out);
        serde_json::from_str::<serde_json::Value>(&text)
            .unwrap_or_else(|e| panic!("{args:?} emitted invalid JSON ({e}): {text}"));
    }
}
