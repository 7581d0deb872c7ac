//! End-to-end runs of the binary against the bundled manifests: command
//! behavior, exit codes, and byte-identical reports across repeated runs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn manifest(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("manifests").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfnum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn simples_and_cartan_on_aq() {
    let m = manifest("aq.toml");
    let m = m.to_str().unwrap();
    let out = run(&["simples", "aq", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("1 simple module(s)"));
    assert!(text.contains("multiplicity 4"));
    let out = run(&["cartan", "aq", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[4]"));
}

#[test]
fn mf_numbers_on_aq() {
    let m = manifest("aq.toml");
    let m = m.to_str().unwrap();
    let out = run(&["mf-number", "aq", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("\"result\": \"2\""));
    let out = run(&["sigma-mf-number", "aq", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"result\": \"2\""));
    let out = run(&["subfield-bound", "aq", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"m\": 2"));
}

#[test]
fn transfer_pipeline_via_cli() {
    let m = manifest("aq.toml");
    let m = m.to_str().unwrap();
    let out = run(&["check-perverse", "shift1", "d1", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Perverse"));
    let out = run(&["verify-transfer", "shift1", "d1", "w2", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("overall: pass"));
    assert!(text.contains("\"passed\": true"));
}

#[test]
fn datum_calculus_via_cli() {
    let m = manifest("aq.toml");
    let m = m.to_str().unwrap();
    let out = run(&["datum-invert", "d1", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("q = [-1]"));
    let out = run(&["datum-twist", "d1", "--t", "1", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("q = [1]"));
}

#[test]
fn blocks_witness_and_out_bound_on_c3() {
    let m = manifest("c3.toml");
    let m = m.to_str().unwrap();
    let out = run(&["blocks", "kc3", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("dimension 1").count(), 3);
    let out = run(&["defect", "kc3", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"defect\": 0"));
    let out = run(&["sigma-mf-number", "kc3", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"result\": \"1\""));
    let out = run(&["out-bound", "c3", "--p", "3", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"bound\": 4"));
    let out = run(&["check-perverse", "id", "steps", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn perversity_violation_exits_nonzero() {
    let m = manifest("dual.toml");
    let m = m.to_str().unwrap();
    // identity against the shifted datum: forced violation at j = 0
    let out = run(&["check-perverse", "id", "shifted", "--manifest", m]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"perverse\": false"));
    // the inclusion complex realizes the flat datum
    let out = run(&["check-perverse", "via_incl", "flat", "--manifest", m]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn invalid_manifests_exit_two_with_the_object_named() {
    let m = manifest("bad.toml");
    let m = m.to_str().unwrap();
    let out = run(&["simples", "broken", "--manifest", m]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken"), "stderr should name the object: {err}");
    assert!(err.contains("associative"), "stderr should name the cause: {err}");
    // dangling reference
    let good = manifest("aq.toml");
    let out = run(&["simples", "missing", "--manifest", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dangling"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let m = manifest("aq.toml");
    let m = m.to_str().unwrap();
    for args in [
        vec!["simples", "aq", "--manifest", m],
        vec!["verify-transfer", "shift1", "d1", "w2", "--manifest", m],
        vec!["twist", "aq", "--t", "1", "--manifest", m, "--machine"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout, "nondeterministic output for {args:?}");
    }
}
