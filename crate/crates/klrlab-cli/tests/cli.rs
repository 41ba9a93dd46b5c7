//! End-to-end runs of the `klrlab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn klrlab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klrlab"))
        .args(args)
        .env("KLRLAB_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn doc(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.ends_with('\n') && text.matches('\n').count() == 1, "{text:?}");
    serde_json::from_str(&text).unwrap()
}

#[test]
fn documented_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = klrlab(dir.path(), &["gt", "enum", "--partition", "2,1,0"]);
    assert!(out.status.success());
    assert_eq!(doc(&out).as_array().unwrap().len(), 8);

    let out = klrlab(dir.path(), &["branch", "check", "--partition", "2,1,0"]);
    assert!(out.status.success());
    assert_eq!(doc(&out), json!({"ok": true, "lhs": 8, "rhs": [2, 3, 1, 2]}));

    let out = klrlab(dir.path(), &["cyc", "compare", "--partition", "1,0", "--seq", "1"]);
    assert!(out.status.success());
    let d = doc(&out);
    assert_eq!(d["gdim"], json!([[0, 1]]));
    assert_eq!(d["shapovalov"], json!([[0, 1]]));
    assert_eq!(d["ok"], json!(true));
}

#[test]
fn warm_cache_is_byte_identical_and_corruption_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cyc", "compare", "--partition", "2,0", "--beta", "2"];
    let cold = klrlab(dir.path(), &args);
    assert!(cold.status.success());
    let entries: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let warm = klrlab(dir.path(), &args);
    assert_eq!(cold.stdout, warm.stdout);

    let path = entries[0].as_ref().unwrap().path();
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replace("\\\"ok\\\":true", "\\\"ok\\\":false")).unwrap();
    let again = klrlab(dir.path(), &args);
    assert!(again.status.success());
    assert_eq!(again.stdout, cold.stdout);
    assert!(String::from_utf8_lossy(&again.stderr).contains("integrity"));
    assert_eq!(fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn cache_dir_flag_overrides_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let out = klrlab(
        env_dir.path(),
        &["oracle", "gram", "--partition", "2,0", "--beta", "1", "--cache-dir", flag_dir.path().to_str().unwrap()],
    );
    assert!(out.status.success());
    assert_eq!(fs::read_dir(flag_dir.path()).unwrap().count(), 1);
    assert_eq!(fs::read_dir(env_dir.path()).unwrap().count(), 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(klrlab(dir.path(), &["gt", "enum", "--partition", "2,x,0"]).status.code(), Some(2));
    assert_eq!(klrlab(dir.path(), &["gt", "enum", "--partition", "1,2"]).status.code(), Some(2));
    assert_eq!(klrlab(dir.path(), &["cyc", "gdim", "--partition", "1,0"]).status.code(), Some(2));
    assert_eq!(klrlab(dir.path(), &["klr", "nf", "--rank", "2", "--seq", "1,3"]).status.code(), Some(2));
    assert_eq!(klrlab(dir.path(), &["frobnicate"]).status.code(), Some(2));
    let capped = ["cyc", "gdim", "--partition", "2,0", "--seq", "1,1", "--deg-cap", "1", "--no-cache"];
    let out = klrlab(dir.path(), &capped);
    assert!(out.status.success());
    assert_eq!(doc(&out)["status"], json!("capped"));
    let mut strict = capped.to_vec();
    strict.push("--require-exact");
    assert_eq!(klrlab(dir.path(), &strict).status.code(), Some(1));
    let out = klrlab(dir.path(), &["cyc", "gdim", "--partition", "2,0", "--seq", "1,1", "--require-exact"]);
    assert!(out.status.success());
    assert_eq!(doc(&out)["gdim"], json!([[-2, 1], [0, 2], [2, 1]]));
}

#[test]
fn klr_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = klrlab(dir.path(), &["klr", "nf", "--rank", "2", "--seq", "1,2", "--ops", "s1,s1"]);
    assert!(out.status.success());
    assert_eq!(doc(&out)["text"], json!("1·x1·1[1,2] + 1·x2·1[1,2]"));
    let out = klrlab(dir.path(), &["klr", "degree", "--rank", "2", "--seq", "2,2", "--ops", "s1"]);
    assert_eq!(doc(&out), json!({"degree": -2}));
    let out = klrlab(dir.path(), &["klr", "factor", "--rank", "3", "--seq", "2,2,3"]);
    assert!(out.status.success());
    let d = doc(&out);
    assert_eq!(d["reconstructs"], json!(true));
    assert_eq!(d["terms"].as_array().unwrap().len(), 2);

    let input = dir.path().join("word.json");
    fs::write(&input, r#"{"rank":1,"bottom":[1,1],"ops":[{"kind":"dot","pos":1}]}"#).unwrap();
    let out = klrlab(dir.path(), &["cyc", "reduce", "--partition", "2,0", "--in", input.to_str().unwrap()]);
    assert!(out.status.success());
    let d = doc(&out);
    assert_eq!(d["status"], json!("exact"));
    assert_eq!(d["text"], json!("-1·x2·1[1,1]"));
}

#[test]
fn cyclotomic_checks() {
    let dir = tempfile::tempdir().unwrap();
    for l in 0..=3 {
        let p = format!("{l},0");
        let out = klrlab(dir.path(), &["cyc", "sl2-vanish", "--partition", &p]);
        assert!(out.status.success(), "{p}");
    }
    let out = klrlab(dir.path(), &["cyc", "weyl-vanish", "--partition", "1,1,0"]);
    assert!(out.status.success());
    assert_eq!(doc(&out)["ok"], json!(true));
    let out = klrlab(dir.path(), &["cyc", "gt-ortho", "--partition", "2,1,0"]);
    assert!(out.status.success());
    assert_eq!(doc(&out)["pairs_checked"], json!(56));
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("weights.csv");
    let out = klrlab(
        dir.path(),
        &["weights", "schur", "--parts", "3", "--degree", "2", "--dominant", "--format", "csv", "--out", target.to_str().unwrap()],
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&target).unwrap(), "value\n\"[2,0,0]\"\n\"[1,1,0]\"\n");
    let out = klrlab(dir.path(), &["gt", "idem", "--partition", "2,1,0", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.contains("\"[[2,1,0],[1,0],[0]]\",\"[1,2,2,1]\""));
}

#[test]
fn acceptance_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let out = klrlab(dir.path(), &["suite", "acceptance", "--criterion", "5"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("PASS  5"));
    assert_eq!(doc(&out)["pass"], json!(true));
    assert_eq!(klrlab(dir.path(), &["suite", "acceptance", "--criterion", "12"]).status.code(), Some(2));
}
