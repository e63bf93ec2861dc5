use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn formstr(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formstr"))
        .args(args)
        .env("FORMSTR_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn envelope(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "one JSON line expected: {text}");
    serde_json::from_str(&text).unwrap()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v.as_object_mut().unwrap().remove("cache_hit");
    v
}

#[test]
fn absolute_strength_of_sum_of_squares() {
    let dir = tempfile::tempdir().unwrap();
    let v = envelope(&formstr(dir.path(), &["strength", "--form", "x1^2+x2^2", "--mode", "astr"]));
    assert_eq!(v["command"], "strength");
    assert_eq!(v["field"], "QQ");
    assert_eq!(v["payload"]["astr"], 1);
    for key in ["inputs", "input", "payload", "timing", "version", "cache_hit"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn exact_strength_over_gf2() {
    let dir = tempfile::tempdir().unwrap();
    let v = envelope(&formstr(dir.path(), &["strength", "--field", "GF(2)", "--form", "x1*x2+x3*x4", "--mode", "exact"]));
    let c = &v["payload"]["certificate"];
    assert_eq!(c["status"], "Exact");
    assert_eq!(c["str"], 2);
    assert_eq!(c["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn max_s_caps_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let v = envelope(&formstr(
        dir.path(),
        &["--no-cache", "strength", "--field", "GF(2)", "--form", "x1*x2+x3*x4+x5*x6", "--mode", "exact", "--max-s", "1"],
    ));
    let c = &v["payload"]["certificate"];
    assert_eq!(c["upper"], 3);
    assert!(c["lower"].as_u64().unwrap() <= 2);
}

#[test]
fn torsor_delta_components() {
    let dir = tempfile::tempdir().unwrap();
    let v = envelope(&formstr(dir.path(), &["torsor", "delta", "--fiber", "x", "--f", "x^2"]));
    let comps = v["payload"]["components"].as_object().unwrap();
    let keys: Vec<_> = comps.keys().map(String::as_str).collect();
    assert_eq!(keys, ["0", "1", "2"]);
    assert_eq!(comps["1"], "2*x*y");
}

#[test]
fn descend_and_derive() {
    let dir = tempfile::tempdir().unwrap();
    let v = envelope(&formstr(dir.path(), &["torsor", "descend", "--field", "GF(2)", "--fiber", "x", "--f", "x^4"]));
    assert_eq!(v["payload"]["q"], 4);
    assert_eq!(v["payload"]["reconstructs"], true);
    let v = envelope(&formstr(dir.path(), &["torsor", "derive", "--fiber", "x,y", "--f", "x^2*y", "--r", "1,2"]));
    assert_eq!(v["payload"]["derivative"], "2*x^2+2*x*y");
}

#[test]
fn witness_and_glcase() {
    let dir = tempfile::tempdir().unwrap();
    let args =
        ["torsor", "witness", "--params", "a", "--m", "1", "--n", "1", "--f", "zu1u1^2-a*zu1u1", "--r0", "zu1u1=1", "--phi", "0"];
    let v = envelope(&formstr(dir.path(), &args));
    assert_eq!(v["payload"]["passed"], true);
    assert_eq!(v["payload"]["h"], "-a+2*zu1u1");
    let v = envelope(&formstr(dir.path(), &["glcase", "ns-check", "--n", "2"]));
    assert_eq!(v["payload"]["passed"], true);
    let v = envelope(&formstr(dir.path(), &["glcase", "shift-dims", "--a", "2", "--m", "1", "--n", "2"]));
    assert_eq!(v["payload"]["total"], 6);
}

#[test]
fn cached_and_uncached_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["strength", "--field", "GF(2)", "--form", "x1*x2*x3+x4^3", "--mode", "bounds"];
    let first = envelope(&formstr(dir.path(), &args));
    let second = envelope(&formstr(dir.path(), &args));
    let mut no_cache = vec!["--no-cache"];
    no_cache.extend(args);
    let third = envelope(&formstr(dir.path(), &no_cache));
    assert_eq!(first["cache_hit"], false);
    assert_eq!(second["cache_hit"], true);
    assert_eq!(third["cache_hit"], false);
    assert_eq!(without_timing(first.clone()), without_timing(second));
    assert_eq!(without_timing(first), without_timing(third));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--no-cache", "extend", "--form", "x1^2+x2^2", "--target-s", "1"];
    let a = envelope(&formstr(dir.path(), &args));
    let b = envelope(&formstr(dir.path(), &args));
    assert_eq!(a["payload"]["found"], true);
    assert_eq!(without_timing(a), without_timing(b));
}

#[test]
fn pretty_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = formstr(dir.path(), &["--pretty", "--no-cache", "strength", "--form", "x1^2+x2^2", "--mode", "astr"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 1);
    let v: Value = serde_json::from_str(&text).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_form = formstr(dir.path(), &["strength", "--form", "x+"]);
    assert_eq!(bad_form.status.code(), Some(1));
    assert!(bad_form.stdout.is_empty());
    let not_homogeneous = formstr(dir.path(), &["strength", "--form", "x^2+y"]);
    assert_eq!(not_homogeneous.status.code(), Some(1));
    let bad_field = formstr(dir.path(), &["strength", "--field", "GF(4)", "--form", "x^2"]);
    assert_eq!(bad_field.status.code(), Some(1));
    let unknown = formstr(dir.path(), &["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(1));
    let help = formstr(dir.path(), &["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn verify_subset() {
    let dir = tempfile::tempdir().unwrap();
    let v = envelope(&formstr(dir.path(), &["verify", "--only", "1,2"]));
    let criteria = v["payload"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 2);
    assert_eq!(v["payload"]["passed"], true);
    assert!(v["timing"]["criteria_ms"]["1"]["elapsed_ms"].is_number());
}
