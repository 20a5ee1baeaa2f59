use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mapcone"));
    cmd.args(args)
        .arg("-")
        .env_remove("MAPCONE_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str], stdin: &str) -> (i32, Value) {
    let (code, out) = run(args, stdin, &[]);
    (code, serde_json::from_str(&out).unwrap())
}

const CUBE: &str = "x1^2\nx1*x2\nx1*x3\nx2^2\nx2*x3\nx3^2\n";
const ACI: &str = "f: x1^2, x2^2\ng: x1, x2\na: x1, 0\na: 0, x2\n";

#[test]
fn betti_of_square_of_maximal_ideal() {
    let (code, v) = json(&["betti"], CUBE);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "mapcone-v1");
    assert_eq!(v["betti_formula"]["totals"], serde_json::json!([1, 6, 8, 3]));
    assert_eq!(v["betti_oracle"]["totals"], serde_json::json!([1, 6, 8, 3]));
    assert_eq!(v["match"], true);
}

#[test]
fn analyze_reports_irregular_witness() {
    let (code, v) = json(&["analyze"], "x2*x4\nx1*x2\nx1*x3\n");
    assert_eq!(code, 0);
    assert_eq!(v["class_report"]["linear_quotients"], true);
    assert_eq!(v["regular"], false);
    assert_eq!(v["sets"][2]["set"], serde_json::json!([2]));
    let w = &v["regularity_witness"];
    assert_eq!((w["u"].as_str(), w["s"].as_u64()), (Some("x1*x3"), Some(2)));
    assert_eq!(w["found"], serde_json::json!([4]));
}

#[test]
fn resolve_refuses_degree_order_violation() {
    let (code, v) = json(&["resolve"], "x1*x2\nx2*x3*x4\nx1*x3\n");
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "DegreeOrderViolation");
    assert_eq!(v["error"]["refusal"], true);
    assert!(v.get("resolution").is_none());
}

#[test]
fn resolve_exports_sorted_labels() {
    let (code, v) = json(&["resolve"], "x1\nx2\nx3\n");
    assert_eq!(code, 0);
    assert_eq!(v["resolution"]["ranks"], serde_json::json!([1, 3, 3, 1]));
    let top = &v["resolution"]["modules"][3]["basis"][0];
    assert_eq!(top["sigma"], serde_json::json!([1, 2]));
    assert_eq!(top["generator"], 3);
    let entry = &v["resolution"]["differentials"][0]["entries"][0];
    assert_eq!(entry["coeff_numerator"], 1);
    assert_eq!(entry["coeff_denominator"], 1);
    assert_eq!(entry["exponent_vector"], serde_json::json!([1, 0, 0]));
}

#[test]
fn verify_passes_for_stable_ideal() {
    let (code, v) = json(&["verify"], CUBE);
    assert_eq!(code, 0);
    assert_eq!(v["verify"]["passed"], true);
    assert_eq!(v["verify"]["exactness"], "box-certified");
}

#[test]
fn orders() {
    let (code, _) = json(&["resolve"], "x2*x3\nx1*x2\nx1^2\n");
    assert_eq!(code, 2);
    let (code, v) = json(&["resolve", "--order", "degrevlex"], "x2*x3\nx1*x2\nx1^2\n");
    assert_eq!(code, 0);
    assert_eq!(v["input"]["generators"], serde_json::json!(["x1^2", "x1*x2", "x2*x3"]));
    let (code, v) = json(&["analyze", "--order", "search"], "x1*x2\nx2*x3*x4\nx1*x3\n");
    assert_eq!(code, 0);
    assert_eq!(v["class_report"]["linear_quotients"], true);
}

#[test]
fn matroid_input() {
    let (code, v) = json(&["analyze", "--matroid"], "1 2\n1 3\n2 3\n");
    assert_eq!(code, 0);
    assert_eq!(v["input"]["generators"], serde_json::json!(["x1*x2", "x1*x3", "x2*x3"]));
    assert_eq!(v["class_report"]["matroidal"], true);
    assert_eq!(v["regular"], true);
    let (code, v) = json(&["analyze", "--matroid"], "1 2\n3 4\n");
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "NotAMatroid");
}

#[test]
fn parse_errors_exit_one() {
    let (code, v) = json(&["analyze"], "x1*y2\n");
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "Parse");
    let (code, v) = json(&["analyze"], "x1*x2\nx1*x2*x3\n");
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "NonMinimal");
    let (code, _) = run(&["nonsense"], "", &[]);
    assert_eq!(code, 1);
}

#[test]
fn dg_commands() {
    let (code, v) = json(&["taylor"], "x1^2\nx1*x2\nx2^3\n");
    assert_eq!(code, 0);
    assert!(v["dg"]["dg_check"]["associative"].as_bool().unwrap());
    assert!(v["dg"]["star_isomorphism"]["products"].as_bool().unwrap());
    let (code, v) = json(&["taylor", "--tables"], "x1\nx2\n");
    assert_eq!(code, 0);
    assert!(!v["dg"]["algebra"]["products"].as_array().unwrap().is_empty());
    let (code, v) = json(&["dgcheck"], "x1^2\nx1*x2\n");
    assert_eq!(code, 0);
    assert_eq!(v["dg"]["taylor_koszul_type"]["rank_condition"], true);
}

#[test]
fn aci_and_sequences() {
    let (code, v) = json(&["aci"], ACI);
    assert_eq!(code, 0);
    assert_eq!(v["dg"]["betti"]["totals"], serde_json::json!([1, 3, 2]));
    assert_eq!(v["dg"]["composites"]["tilde_after_phi"], true);
    assert_eq!(v["verify"]["exact"], true);
    let (code, v) = json(&["aci"], "f: x1^2, x2^2\ng: x1, x2\na: x2, 0\na: 0, x2\n");
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "RelationViolation");
    let seq = "f: x1^2, x2^2, x1*x2\nsteps: regular, linked\ng: x1, x2\na: x1, 0\na: 0, x2\n";
    let (code, v) = json(&["koszulseq"], seq);
    assert_eq!(code, 0);
    assert_eq!(v["dg"]["passed"], true);
}

#[test]
fn deterministic_output_and_seed_override() {
    let a = run(&["aci", "--seed", "5"], ACI, &[]);
    let b = run(&["aci", "--seed", "5"], ACI, &[]);
    assert_eq!(a, b);
    let c = run(&["aci", "--seed", "7"], ACI, &[("MAPCONE_SEED", "5")]);
    assert_eq!(a, c);
    let (code, _) = run(&["aci"], ACI, &[("MAPCONE_SEED", "abc")]);
    assert_eq!(code, 1);
}

#[test]
fn text_mode() {
    let (code, out) = run(&["betti", "--text"], CUBE, &[]);
    assert_eq!(code, 0);
    assert!(out.contains("total: 1 6 8 3"));
    assert!(out.contains("match: true"));
}
