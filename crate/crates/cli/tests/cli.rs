//! End-to-end tests of the command-line interface: exit codes, JSON shape,
//! and byte-level determinism.

use serde_json::Value;
use std::process::{Command, Output};

fn netconics(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netconics"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn hessian_identity_single_lambda() {
    let out = netconics(&["hessian-identity", "--lambda", "1"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["schema"], "netconics/1");
    assert_eq!(doc["all_equal"], true);
    assert_eq!(doc["results"][0]["j_phi"], "9261/8");
    assert_eq!(doc["results"][0]["j_gamma"], doc["results"][0]["rhs"]);
}

#[test]
fn hessian_identity_random_batch() {
    let out = netconics(&["hessian-identity", "--random", "20", "--seed", "7"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["checked"], 20);
    assert_eq!(doc["all_equal"], true);
}

#[test]
fn hessian_identity_pole_is_usage_error() {
    let out = netconics(&["hessian-identity", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("formula pole"), "stderr: {err}");
}

#[test]
fn fb_triple_root() {
    let out = netconics(&["fb", "--b", "0"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["rational_roots"][0]["root"], "6912");
    assert_eq!(doc["rational_roots"][0]["multiplicity"], 3);
    assert_eq!(doc["decomposition"]["class_total"], 12);
}

#[test]
fn fb_mixed_roots_at_1728() {
    let out = netconics(&["fb", "--b", "1728"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    let roots = doc["rational_roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    assert_eq!(roots[0]["root"], "-13824");
    assert_eq!(roots[0]["multiplicity"], 2);
    assert_eq!(roots[1]["root"], "1728");
    assert_eq!(roots[1]["multiplicity"], 1);
}

#[test]
fn dual_degree_cayley() {
    let out = netconics(&["dual-degree", "--d", "3", "--nodes", "4"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["dual_degree"], "4");
    assert_eq!(
        doc["strict_transform"],
        "3L_1 - 2G_1,1 - 2G_1,2 - 2G_1,3 - 2G_1,4"
    );
    // degree must be at least 2
    let bad = netconics(&["dual-degree", "--d", "1", "--nodes", "0"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_h0_passes() {
    let out = netconics(&["verify-h0"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["report"]["kind"], "Node");
    assert_eq!(doc["report"]["j"], "infinity");
    assert_eq!(doc["report"]["node_conic_rank"], 2);
}

#[test]
fn sweep_seed_one_with_fiber() {
    let out = netconics(&["sweep", "--seed", "1", "--j", "100"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    let sweep = &doc["sweeps"][0];
    assert_eq!(sweep["a_inf"], 8);
    assert_eq!(sweep["profile"], serde_json::json!([[1, 4], [2, 4]]));
    assert_eq!(sweep["b1"], 4);
    assert_eq!(sweep["b2"], 4);
    assert_eq!(sweep["fiber"]["total_multiplicity"], 12);
    assert_eq!(sweep["tangent_cones"]["ok"], true);
}

#[test]
fn sweep_seed_range_emits_ledger() {
    let out = netconics(&["sweep", "--seeds", "1..3"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    let ledger = &doc["ledger"];
    assert_eq!(ledger["b1"], 4);
    assert_eq!(ledger["b2"], 4);
    assert_eq!(ledger["l1"], 2);
    assert_eq!(ledger["l2"], 1);
    assert_eq!(ledger["fiber_class"], 12);
    assert_eq!(ledger["orbit_class"], 4);
}

#[test]
fn stabilizer_lambda_one() {
    let out = netconics(&["stabilizer", "--lambda", "1", "--samples", "50"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["group"]["order"], 18);
    assert_eq!(doc["group"]["closed"], true);
    assert_eq!(doc["survey"][0]["candidates_ok"], 18);
    assert_eq!(doc["survey"][0]["extra_found"], 0);
}

#[test]
fn bad_tolerance_is_usage_error() {
    let out = netconics(&["verify-h0", "--tolerance", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let a = netconics(&["sweep", "--seed", "4", "--j", "7/2"]);
    let b = netconics(&["sweep", "--seed", "4", "--j", "7/2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_full_battery() {
    let out = netconics(&["report", "--samples", "200"]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json_of(&out);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["theorem_1_3"]["class_sigma1"], 4);
    assert_eq!(doc["theorem_1_3"]["pass"], true);
    assert_eq!(doc["lemma_3_4"]["dual_degree"], "4");
    assert_eq!(doc["lemma_3_4"]["degree_arithmetic"], "12 - 2(4) = 4");
    assert_eq!(doc["theorem_3_8"]["orbit_class_sigma1"], 4);
    assert_eq!(doc["theorem_3_3"]["a_inf"], 8);
    assert_eq!(doc["theorem_3_6"]["fiber_class_sigma1"], 12);
    assert_eq!(
        doc["lemma_3_7"]["critical_b"],
        serde_json::json!(["0", "1728"])
    );
}

#[test]
fn report_negative_control_fails() {
    let out = netconics(&["report", "--negative-control", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_eq!(doc["pass"], false);
    assert_eq!(doc["calibration_anchor"]["pass"], false);
}

#[test]
fn text_format_renders() {
    let out = netconics(&["verify-h0", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("kind: \"Node\""));
}
