use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ordpsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordpsr")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json")).display().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ordpsr-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn write(dir: &Path, file: &str, text: &str) -> String {
    let p = dir.join(file);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn bundled_pipelines_succeed() {
    for name in ["diag-ordinary", "s3-irreducible", "plane-tower-r2"] {
        let o = ordpsr(&["pipeline", &scenario(name)]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let r = json(&o);
        assert_eq!(r["schema"], "ordpsr-report/1");
        assert_eq!(r["scenario"], name);
        assert_eq!(r["failures"], Value::Array(vec![]));
    }
}

#[test]
fn diagonal_scenario_is_ordinary_and_split() {
    let r = json(&ordpsr(&["pipeline", &scenario("diag-ordinary")]));
    let law = &r["law"];
    assert_eq!(law["validate"]["valid"], true);
    assert_eq!(law["reducibility"]["ideal"]["zero"], true);
    assert_eq!(law["reducibility"]["verified"], true);
    assert_eq!(law["ordinary"]["is_ordinary"], true);
    assert_eq!(law["psrep_ordinary"]["ordinary"], true);
}

#[test]
fn irreducible_scenario_runs_every_stage() {
    let r = json(&ordpsr(&["pipeline", &scenario("s3-irreducible")]));
    for stage in ["kernel", "ch", "residual", "gma", "reducibility", "ordinary", "psrep_ordinary"] {
        assert_eq!(r["law"][stage]["status"], "ok", "{stage}");
    }
}

#[test]
fn tower_scenario_meets_the_criterion() {
    let o = ordpsr(&["criterion", &scenario("plane-tower-r2")]);
    assert_eq!(code(&o), 0);
    let t = &json(&o)["tower"];
    for c in ["c2", "c3", "c4", "c5", "c6"] {
        assert_eq!(t["audit"][c], "true", "{c}");
    }
    assert_eq!(t["audit"]["c1"], "skipped");
    let l = &t["lenstra"];
    assert_eq!(l["cotangent_length"], 2);
    assert_eq!(l["eta_length"], 2);
    assert_eq!(l["criterion_met"], true);
    assert_eq!(l["complete_intersection"], true);
    assert_eq!(t["fitting"]["bound_holds"], true);
}

#[test]
fn text_format_is_line_oriented() {
    let o = ordpsr(&["pipeline", &scenario("plane-tower-r2"), "--format", "text"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("schema: ordpsr-report/1\n"));
    assert!(text.contains("scenario: plane-tower-r2\n"));
    assert!(text.lines().any(|l| l.trim() == "c2: true"));
}

#[test]
fn invalid_law_exits_one_with_witness() {
    let dir = scratch("invalid");
    let f = write(
        &dir,
        "bad.json",
        r#"{"schema": "ordpsr-scenario/1", "name": "bad-law", "seed": 0,
            "law": {"ring": {"kind": "field", "p": 5, "f": 1}, "group": {"kind": "cyclic", "n": 2},
                    "rep": {"kind": "law", "trace": [2, 3], "det": [1, 2]}}}"#,
    );
    let o = ordpsr(&["validate", &f]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["law"]["validate"]["valid"], false);
    assert_eq!(r["law"]["validate"]["violation"]["identity"], "det_multiplicative");
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad-law"));
    assert_eq!(code(&ordpsr(&["pipeline", &f])), 1);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn input_errors_exit_two() {
    let dir = scratch("input");
    assert_eq!(code(&ordpsr(&["validate", "/nonexistent/scenario.json"])), 2);
    assert_eq!(code(&ordpsr(&["--bogus"])), 2);
    assert_eq!(code(&ordpsr(&["validate"])), 2);
    assert_eq!(code(&ordpsr(&["pipeline", &scenario("diag-ordinary"), "--format", "yaml"])), 2);

    let f = write(&dir, "m.json", r#"{"schema": "ordpsr-scenario/1", "name": 3}"#);
    let o = ordpsr(&["validate", &f]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("`name`"));

    // No law section for validate.
    assert_eq!(code(&ordpsr(&["validate", &scenario("plane-tower-r2")])), 2);

    let o = ordpsr(&["corpus"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--out"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn budget_overflow_exits_three() {
    let o = ordpsr(&["pipeline", &scenario("s3-irreducible"), "--budget", "10"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget exceeded"));
}

#[test]
fn most_severe_outcome_wins() {
    let dir = scratch("severity");
    let f = write(
        &dir,
        "bad.json",
        r#"{"schema": "ordpsr-scenario/1", "name": "bad-law", "seed": 0,
            "law": {"ring": {"kind": "field", "p": 5, "f": 1}, "group": {"kind": "cyclic", "n": 2},
                    "rep": {"kind": "law", "trace": [2, 3], "det": [1, 2]}}}"#,
    );
    let o = ordpsr(&["pipeline", &f, &scenario("s3-irreducible"), "--budget", "10"]);
    assert_eq!(code(&o), 3);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn out_dir_gets_one_file_per_scenario() {
    let dir = scratch("out");
    let o = ordpsr(&["validate", &scenario("diag-ordinary"), &scenario("s3-irreducible"), "--out", dir.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let mut names: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["diag-ordinary.json", "s3-irreducible.json"]);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn corpus_is_seeded_and_rerunnable() {
    let dir = scratch("corpus");
    let run = |seed: &str, sub: &str| {
        let out = dir.join(sub);
        let o = ordpsr(&["corpus", "--count", "1", "--seed", seed, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        (json(&o), out)
    };
    let (a, a_dir) = run("7", "a");
    let (b, _) = run("7", "b");
    let (c, _) = run("8", "c");
    assert_eq!(a, b);
    assert_ne!(a["checksum"], c["checksum"]);

    // The written corpus is itself valid input.
    let o = ordpsr(&["pipeline", a_dir.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn seed_override_is_reported() {
    let r = json(&ordpsr(&["validate", &scenario("diag-ordinary"), "--seed", "42"]));
    assert_eq!(r["seed"], 42);
}
