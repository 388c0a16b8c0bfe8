//! End-to-end tests driving the compiled binary: JSON reports on stdout,
//! error objects on stderr, and the exit-code contract (0 success, 2 bad
//! input, 3 numerical failure, 4 not a Frobenius homomorphism).

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-fixtures");
    fs::create_dir_all(&dir).expect("fixture dir");
    let path = dir.join(name);
    fs::write(&path, contents).expect("write fixture");
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "expected success, got {:?}; stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON report")
}

fn error_report(out: &Output, expected_code: i32) -> Value {
    assert_eq!(
        out.status.code(),
        Some(expected_code),
        "stdout: {} stderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is one JSON object");
    err["error"].clone()
}

const UNIFORM3: &str = r#"{
  "kind": "finite",
  "finite": {
    "labels": ["p", "q", "r"],
    "values": [{"re": "1", "im": "0"}, {"re": "1", "im": "0"}, {"re": "1", "im": "0"}]
  }
}"#;

/// ev_1 + ev_2 on one variable, moments up to degree 3.
const TWO_POINTS: &str = r#"{
  "kind": "moments",
  "moments": {
    "num_vars": 1,
    "degree_bound": 3,
    "entries": [
      {"exponents": [0], "value": {"re": "2", "im": "0"}},
      {"exponents": [1], "value": {"re": "3", "im": "0"}},
      {"exponents": [2], "value": {"re": "5", "im": "0"}},
      {"exponents": [3], "value": {"re": "9", "im": "0"}}
    ]
  }
}"#;

/// ev at +sqrt(2) and -sqrt(2): exact root extraction cannot finish, the
/// adaptive pipeline must hand over to floats.
const IRRATIONAL_PAIR: &str = r#"{
  "kind": "moments",
  "moments": {
    "num_vars": 1,
    "degree_bound": 4,
    "entries": [
      {"exponents": [0], "value": {"re": "2", "im": "0"}},
      {"exponents": [1], "value": {"re": "0", "im": "0"}},
      {"exponents": [2], "value": {"re": "4", "im": "0"}},
      {"exponents": [3], "value": {"re": "0", "im": "0"}},
      {"exponents": [4], "value": {"re": "8", "im": "0"}}
    ]
  }
}"#;

/// ev_(1,1) + ev_(2,4): both points on the parabola u2 = u1^2.
const ON_PARABOLA: &str = r#"{
  "kind": "moments",
  "moments": {
    "num_vars": 2,
    "degree_bound": 2,
    "entries": [
      {"exponents": [0, 0], "value": {"re": "2", "im": "0"}},
      {"exponents": [1, 0], "value": {"re": "3", "im": "0"}},
      {"exponents": [0, 1], "value": {"re": "5", "im": "0"}},
      {"exponents": [2, 0], "value": {"re": "5", "im": "0"}},
      {"exponents": [1, 1], "value": {"re": "9", "im": "0"}},
      {"exponents": [0, 2], "value": {"re": "17", "im": "0"}}
    ]
  }
}"#;

/// ev_(1,3): off the parabola.
const OFF_PARABOLA: &str = r#"{
  "kind": "moments",
  "moments": {
    "num_vars": 2,
    "degree_bound": 2,
    "entries": [
      {"exponents": [0, 0], "value": {"re": "1", "im": "0"}},
      {"exponents": [1, 0], "value": {"re": "1", "im": "0"}},
      {"exponents": [0, 1], "value": {"re": "3", "im": "0"}},
      {"exponents": [2, 0], "value": {"re": "1", "im": "0"}},
      {"exponents": [1, 1], "value": {"re": "3", "im": "0"}},
      {"exponents": [0, 2], "value": {"re": "9", "im": "0"}}
    ]
  }
}"#;

const PARABOLA_IDEAL: &str = r#"{"num_vars": 2, "generators": ["u2 - u1^2"]}"#;

#[test]
fn phi_on_finite_uniform_weight() {
    let input = fixture("uniform3.json", UNIFORM3);
    let out = run(&[
        "phi",
        "--input",
        input.to_str().unwrap(),
        "[1, 1, 1]",
        "[1, 1, 1]",
    ]);
    let rep = report(&out);
    assert_eq!(rep["command"], "phi");
    assert_eq!(rep["scalar_mode"], "exact");
    assert_eq!(rep["timing_ms"], Value::Null);
    assert!(rep["input_digest"].as_str().unwrap().starts_with("sha256:"));
    // f(1) = 3, so Phi_2(1, 1) = 3^2 - 3 = 6 by every route
    for method in ["permutation", "partition", "inductive"] {
        assert_eq!(rep["outputs"]["methods"][method]["re"], "6");
        assert_eq!(rep["outputs"]["methods"][method]["im"], "0");
    }
    assert_eq!(rep["outputs"]["methods_agree"], true);
}

#[test]
fn phi_of_the_unit_is_the_unit_value() {
    let doc = r#"{
      "kind": "finite",
      "finite": {
        "labels": ["p", "q", "r"],
        "values": [{"re": "2", "im": "0"}, {"re": "1", "im": "0"}, {"re": "0", "im": "0"}]
      }
    }"#;
    let input = fixture("finite_210_unit.json", doc);
    let out = run(&["phi", "--input", input.to_str().unwrap(), "[1, 1, 1]"]);
    let rep = report(&out);
    // Phi_1(f) is f itself, and the all-ones vector is the algebra unit
    assert_eq!(rep["outputs"]["arity"], 1);
    for method in ["permutation", "partition", "inductive"] {
        assert_eq!(rep["outputs"]["methods"][method]["re"], "3");
    }
}

#[test]
fn phi_on_moments_single_method() {
    let input = fixture("two_points_phi.json", TWO_POINTS);
    let out = run(&[
        "phi",
        "--input",
        input.to_str().unwrap(),
        "--method",
        "part",
        "u1",
        "u1",
    ]);
    let rep = report(&out);
    // f = ev_1 + ev_2: Phi_2(u, u) = f(u)^2 - f(u^2) = 9 - 5 = 4
    assert_eq!(rep["outputs"]["methods"]["partition"]["re"], "4");
    assert!(rep["outputs"]["methods"].get("permutation").is_none());
    // a single method has nothing to cross-check
    assert_eq!(rep["outputs"]["methods_agree"], Value::Null);
}

#[test]
fn degree_certifies_two_point_moments() {
    let input = fixture("two_points_degree.json", TWO_POINTS);
    let out = run(&["degree", "--input", input.to_str().unwrap()]);
    let rep = report(&out);
    assert_eq!(rep["outputs"]["degree"], 2);
    assert_eq!(rep["outputs"]["scope"], "monomials up to degree 3");
    assert_eq!(rep["outputs"]["certificate"]["failure"], Value::Null);
    assert_eq!(rep["outputs"]["certificate"]["f1_value"]["re"], "2");
}

#[test]
fn degree_of_the_zero_functional_is_zero() {
    let doc = r#"{
      "kind": "finite",
      "finite": {
        "labels": ["p", "q"],
        "values": [{"re": "0", "im": "0"}, {"re": "0", "im": "0"}]
      }
    }"#;
    let input = fixture("zero_functional.json", doc);
    let out = run(&["degree", "--input", input.to_str().unwrap()]);
    let rep = report(&out);
    assert_eq!(rep["outputs"]["degree"], 0);
    assert_eq!(rep["outputs"]["scope"], "exhaustive basis");
}

#[test]
fn degree_is_null_for_fractional_unit_value() {
    let doc = r#"{
      "kind": "finite",
      "finite": {
        "labels": ["p", "q"],
        "values": [{"re": "3/2", "im": "0"}, {"re": "0", "im": "0"}]
      }
    }"#;
    let input = fixture("fractional_unit.json", doc);
    let out = run(&["degree", "--input", input.to_str().unwrap()]);
    let rep = report(&out);
    assert_eq!(rep["outputs"]["degree"], Value::Null);
    assert_eq!(rep["outputs"]["certificate"], Value::Null);
}

#[test]
fn decompose_recovers_two_rational_points() {
    let input = fixture("two_points_dec.json", TWO_POINTS);
    let out = run(&["decompose", "--input", input.to_str().unwrap(), "--n", "2"]);
    let rep = report(&out);
    assert_eq!(rep["seed"], 0);
    let dec = &rep["outputs"]["decomposition"];
    assert_eq!(dec["mode"], "exact");
    assert_eq!(dec["report"]["residual"], 0.0);
    let entries = dec["report"]["points"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0][0][0]["re"], "1");
    assert_eq!(entries[1][0][0]["re"], "2");
    assert_eq!(entries[0][1], 1);
    assert_eq!(entries[1][1], 1);
}

#[test]
fn decompose_output_is_byte_identical_across_runs() {
    let input = fixture("irrational_det.json", IRRATIONAL_PAIR);
    let args = [
        "decompose",
        "--input",
        input.to_str().unwrap(),
        "--n",
        "2",
        "--tol",
        "1e-12",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let rep = report(&first);
    // irrational points force the float fallback
    assert_eq!(rep["outputs"]["decomposition"]["mode"], "float");
}

#[test]
fn decompose_finite_reads_multiplicities() {
    let doc = r#"{
      "kind": "finite",
      "finite": {
        "labels": ["p", "q", "r"],
        "values": [{"re": "2", "im": "0"}, {"re": "1", "im": "0"}, {"re": "0", "im": "0"}]
      }
    }"#;
    let input = fixture("finite_210.json", doc);
    let out = run(&["decompose", "--input", input.to_str().unwrap(), "--n", "3"]);
    let rep = report(&out);
    assert_eq!(rep["outputs"]["kind"], "finite");
    let entries = rep["outputs"]["multiset"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0][0], "p");
    assert_eq!(entries[0][1], 2);
    assert_eq!(entries[1][0], "q");
    assert_eq!(entries[1][1], 1);
}

#[test]
fn halved_functional_exits_not_frobenius() {
    let doc = r#"{
      "kind": "finite",
      "finite": {
        "labels": ["p", "q"],
        "values": [{"re": "1", "im": "0"}, {"re": "1/2", "im": "0"}]
      }
    }"#;
    let input = fixture("halved.json", doc);
    let out = run(&["decompose", "--input", input.to_str().unwrap(), "--n", "2"]);
    let err = error_report(&out, 4);
    assert_eq!(err["kind"], "not-frobenius");
    assert!(err["message"].as_str().unwrap().contains("not an integer"));
}

#[test]
fn decompose_respects_ideal_constraint() {
    let input = fixture("on_parabola.json", ON_PARABOLA);
    let ideal = fixture("parabola.json", PARABOLA_IDEAL);
    let out = run(&[
        "decompose",
        "--input",
        input.to_str().unwrap(),
        "--n",
        "2",
        "--ideal",
        ideal.to_str().unwrap(),
    ]);
    let rep = report(&out);
    assert!(rep["outputs"]["ideal_digest"]
        .as_str()
        .unwrap()
        .starts_with("sha256:"));
    let dec = &rep["outputs"]["decomposition"];
    assert_eq!(dec["mode"], "exact");
    let entries = dec["report"]["points"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    // (1, 1) and (2, 4), both on u2 = u1^2
    assert_eq!(entries[0][0][0]["re"], "1");
    assert_eq!(entries[0][0][1]["re"], "1");
    assert_eq!(entries[1][0][0]["re"], "2");
    assert_eq!(entries[1][0][1]["re"], "4");
}

#[test]
fn off_variety_point_exits_not_frobenius() {
    let input = fixture("off_parabola.json", OFF_PARABOLA);
    let ideal = fixture("parabola_off.json", PARABOLA_IDEAL);
    let out = run(&[
        "decompose",
        "--input",
        input.to_str().unwrap(),
        "--n",
        "1",
        "--ideal",
        ideal.to_str().unwrap(),
    ]);
    let err = error_report(&out, 4);
    assert_eq!(err["kind"], "not-frobenius");
    assert!(err["message"]
        .as_str()
        .unwrap()
        .contains("does not annihilate"));
}

#[test]
fn float_document_is_rejected_in_exact_mode() {
    let doc = r#"{
      "kind": "moments",
      "moments": {
        "num_vars": 1,
        "degree_bound": 2,
        "entries": [
          {"exponents": [0], "value": {"re": 1.0, "im": 0.0, "precision": 128}},
          {"exponents": [1], "value": {"re": 0.5, "im": 0.0, "precision": 128}},
          {"exponents": [2], "value": {"re": 0.25, "im": 0.0, "precision": 128}}
        ]
      }
    }"#;
    let input = fixture("float_doc.json", doc);
    let out = run(&["degree", "--input", input.to_str().unwrap()]);
    let err = error_report(&out, 2);
    assert_eq!(err["kind"], "validation");
    assert!(err["message"].as_str().unwrap().contains("exact mode"));

    // the same document loads fine in float mode
    let out = run(&[
        "degree",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "float",
        "--tol",
        "1e-12",
    ]);
    let rep = report(&out);
    assert_eq!(rep["scalar_mode"], "float");
    assert_eq!(rep["outputs"]["degree"], 1);
}

#[test]
fn parse_errors_carry_positions() {
    let input = fixture("uniform3_parse.json", UNIFORM3);
    let out = run(&["phi", "--input", input.to_str().unwrap(), "[1, 1"]);
    let err = error_report(&out, 2);
    assert_eq!(err["kind"], "validation");
    assert!(err["message"].as_str().unwrap().contains("position"));
}

#[test]
fn corrupted_json_is_a_validation_error() {
    let input = fixture("corrupt.json", "{\"kind\": \"finite\", ");
    let out = run(&["degree", "--input", input.to_str().unwrap()]);
    let err = error_report(&out, 2);
    assert_eq!(err["kind"], "validation");
}

#[test]
fn verify_identity_reports_equality() {
    let out = run(&["verify-identity", "--left", "2", "--right", "2"]);
    let rep = report(&out);
    assert_eq!(rep["outputs"]["equal"], true);
    assert_eq!(rep["outputs"]["pairings_summed"], 7);
    assert_eq!(rep["outputs"]["first_difference"], Value::Null);
}

#[test]
fn selfcheck_passes_all_criteria() {
    let out = run(&["selfcheck"]);
    let rep = report(&out);
    assert_eq!(rep["outputs"]["all_passed"], true);
    let criteria = rep["outputs"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 11);
    assert!(criteria.iter().all(|c| c["passed"] == true));
}

#[test]
fn pretty_mode_prints_text_not_json() {
    let input = fixture("two_points_pretty.json", TWO_POINTS);
    let out = run(&[
        "decompose",
        "--input",
        input.to_str().unwrap(),
        "--n",
        "2",
        "--pretty",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2 point(s), 2 distinct"));
    assert!(text.contains("residual 0e0, retries 0"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}
