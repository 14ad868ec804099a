//! The `bimodconn` binary: commands, exit codes and report files.

use std::path::PathBuf;
use std::process::{Command, Output};

use bimodconn::fixtures::{fixture, FIXTURES};
use bimodconn::report::{Report, Status, ANCHORS};

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(format!("{name}.model"))
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bimodconn")).args(args).output().unwrap()
}

fn json_report(args: &[&str]) -> (Report, i32, String) {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let out = bin(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    (serde_json::from_str(&text).unwrap(), out.status.code().unwrap(), text)
}

#[test]
fn sigma_on_a2_flat_emits_the_matrix() {
    let path = model("a2_flat");
    let (report, code, _) = json_report(&["sigma", "--model", path.to_str().unwrap(), "--connection", "d"]);
    assert_eq!(code, 0);
    let rec = report.record("d.sigma").unwrap();
    assert_eq!(rec.status, Status::Pass);
    assert!(rec.data.as_ref().unwrap()["matrix"].is_array());
    assert!(report.records.iter().all(|r| r.check_id.starts_with("d.")));
}

#[test]
fn curvature_on_a2_flat_is_trivial() {
    let path = model("a2_flat");
    let (report, code, _) = json_report(&["curvature", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report.record("d.curvature").unwrap().data.as_ref().unwrap()["flat"], true);
    let j = report.record("d.j").unwrap();
    assert_eq!(j.dims.as_deref(), Some(&[0, 0, 0, 0][..]));
    assert_eq!(j.data.as_ref().unwrap()["trivial"], true);
    assert_eq!(report.record("dN.j").unwrap().status, Status::Unavailable);
}

#[test]
fn compare_on_twist_attaches_a_witness() {
    let path = model("m2_twist");
    let (report, code, _) = json_report(&["compare", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rec = report.record("twist.compare.induced_preceq_original.first_order").unwrap();
    assert_eq!(rec.status, Status::Fail);
    assert!(rec.witness.is_some());
    let dims = report.record("twist.compare").unwrap().data.clone().unwrap();
    assert_eq!(dims["omega"], serde_json::json!([4, 8, 16, 32]));
    assert_eq!(dims["omega_nabla"], serde_json::json!([4, 8, 8, 8]));
}

#[test]
fn all_is_deterministic_and_anchored() {
    let path = model("a2_degenerate");
    let (report, code, first) = json_report(&["all", "--model", path.to_str().unwrap()]);
    let (_, _, second) = json_report(&["all", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(first, second);
    assert!(report.records.iter().all(|r| ANCHORS.contains(&r.paper_anchor.as_str())));
    assert_eq!(report.to_json(), first);
}

#[test]
fn json_file_and_text_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let path = model("a2_flat_quotient");
    let res = bin(&["check", "--model", path.to_str().unwrap(), "--json", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.lines().any(|l| l == "[PASS] d.right_leibniz"));
    assert!(text.trim_end().ends_with("0 unavailable"));
    let report: Report = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report.command, "check");
    assert_eq!(report.summary.identity_failures, 0);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.model");
    std::fs::write(&bad, "{ \"schema\": 1 ").unwrap();
    assert_eq!(bin(&["check", "--model", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.model");
    assert_eq!(bin(&["check", "--model", missing.to_str().unwrap()]).status.code(), Some(2));
    let path = model("a2_flat");
    let res = bin(&["sigma", "--model", path.to_str().unwrap(), "--connection", "nope"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8(res.stderr).unwrap().contains("unknown connection"));
    assert_eq!(bin(&["bogus"]).status.code(), Some(2));
}

#[test]
fn fixtures_command_reproduces_shipped_models() {
    let dir = tempfile::tempdir().unwrap();
    let res = bin(&["fixtures", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    for name in FIXTURES {
        let written = std::fs::read_to_string(dir.path().join(format!("{name}.model"))).unwrap();
        assert_eq!(written, fixture(name).unwrap().to_json());
        assert_eq!(written, std::fs::read_to_string(model(name)).unwrap());
    }
}
