use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use carathe::caratheodory::{check_hypotheses, verify_certificate, Certificate, Instance};
use serde_json::Value;
use tempfile::TempDir;

fn carathe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carathe")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SQUARE: &str = r#"{"dim":2,"points":[["1","1"],["-1","1"],["-1","-1"],["1","-1"]]}"#;

#[test]
fn gen_is_deterministic_and_valid() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let out = carathe(&[
            "gen", "--variant", "MAIN", "--d", "2", "--r", "3", "--count", "4", "--seed", "11", "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 4);
    for name in names {
        let text = fs::read_to_string(a.join(&name)).unwrap();
        assert_eq!(text, fs::read_to_string(b.join(&name)).unwrap());
        let inst = Instance::from_json(&text).unwrap();
        assert!(check_hypotheses(&inst).passed);
    }
}

#[test]
fn gen_with_sizes() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let out = carathe(&["gen", "--variant", "cc1", "--d", "2", "--r", "3", "--sizes", "3,3,3", "--out", dir]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(tmp.path().join("CC1_0000.json")).unwrap();
    let inst = Instance::from_json(&text).unwrap();
    assert_eq!(inst.config.len(), 9);
}

#[test]
fn gen_rejects_impossible_sizes() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let out = carathe(&["gen", "--variant", "CC1", "--d", "2", "--r", "3", "--sizes", "1,1,1", "--out", dir]);
    assert_eq!(code(&out), 1);
}

#[test]
fn gen_cc3_includes_pairwise_only_instances() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let out = carathe(&["gen", "--variant", "CC3", "--d", "2", "--r", "3", "--count", "5", "--seed", "1", "--out", dir]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut pairwise_only = 0;
    for e in fs::read_dir(tmp.path()).unwrap() {
        let mut v: Value = serde_json::from_str(&fs::read_to_string(e.unwrap().path()).unwrap()).unwrap();
        assert!(check_hypotheses(&Instance::from_json(&v.to_string()).unwrap()).passed);
        v["variant"]["tag"] = "CC1".into();
        if !check_hypotheses(&Instance::from_json(&v.to_string()).unwrap()).passed {
            pairwise_only += 1;
        }
    }
    assert!(pairwise_only > 0);
}

#[test]
fn solve_trivial_line() {
    let tmp = TempDir::new().unwrap();
    let path = write(
        tmp.path(),
        "i.json",
        r#"{"config":{"dim":1,"points":[["1"],["-1"],["2"],["-2"]]},"variant":{"tag":"CC1","classes":[[0,1],[2,3]]}}"#,
    );
    let out = carathe(&["solve", &path]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cert: Certificate = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert.face.len(), 2);
    let inst = Instance::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(verify_certificate(&inst, &cert));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("|J| = 2") && !stderr.contains("warning"));
}

#[test]
fn solve_generated_instances_to_file() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("inst");
    let out = carathe(&[
        "gen", "--variant", "CC2", "--d", "1", "--r", "2", "--count", "3", "--seed", "5", "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    for e in fs::read_dir(&dir).unwrap() {
        let path = e.unwrap().path();
        let cert_path = tmp.path().join("cert.json");
        let out = carathe(&["solve", path.to_str().unwrap(), "--out", cert_path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        let cert: Certificate = serde_json::from_str(&fs::read_to_string(&cert_path).unwrap()).unwrap();
        let inst = Instance::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
        assert!(verify_certificate(&inst, &cert));
    }
}

#[test]
fn solve_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let none = write(
        tmp.path(),
        "none.json",
        r#"{"config":{"dim":1,"points":[["1"],["2"]]},"variant":{"tag":"CC1","classes":[[0],[1]]}}"#,
    );
    let out = carathe(&["solve", &none]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let malformed = write(tmp.path(), "bad.json", "{not json");
    assert_eq!(code(&carathe(&["solve", &malformed])), 1);
    let missing = tmp.path().join("missing.json");
    assert_eq!(code(&carathe(&["solve", missing.to_str().unwrap()])), 1);
    let origin = write(
        tmp.path(),
        "origin.json",
        r#"{"config":{"dim":1,"points":[["0"],["2"]]},"variant":{"tag":"CC1","classes":[[0],[1]]}}"#,
    );
    assert_eq!(code(&carathe(&["solve", &origin])), 1);
}

#[test]
fn lemmas_on_the_square() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "sq.json", SQUARE);
    let out_dir = tmp.path().join("out");
    let out = carathe(&["lemmas", "--config", &cfg, "--subsets", "all", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("lemmas.json")).unwrap()).unwrap();
    assert_eq!(report["subsets"], 14);
    assert_eq!(report["passed"], true);
    let csv = fs::read_to_string(out_dir.join("lemmas.csv")).unwrap();
    assert_eq!(csv.lines().count(), report["rows"].as_array().unwrap().len() + 1);

    let sampled = carathe(&["lemmas", "--config", &cfg, "--subsets", "3", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&sampled), 0);
    let report: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("lemmas.json")).unwrap()).unwrap();
    assert_eq!(report["subsets"], 3);

    let empty = carathe(&["lemmas", "--config", &cfg, "--subsets", "0", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&empty), 0);
    let report: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("lemmas.json")).unwrap()).unwrap();
    assert_eq!(report["subsets"], 0);
    assert_eq!(report["passed"], true);
}

#[test]
fn lemmas_report_corrupted_homology() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "sq.json", SQUARE);
    let out_dir = tmp.path().join("out");
    let out = carathe(&["lemmas", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--corrupt-betti"]);
    assert_eq!(code(&out), 2);
    let report: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("lemmas.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(code(&carathe(&["lemmas", "--config", &cfg, "--subsets", "x", "--out", out_dir.to_str().unwrap()])), 1);
}

#[test]
fn cover_report() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("inst");
    let out = carathe(&[
        "gen", "--variant", "CC1", "--d", "1", "--r", "2", "--N", "3", "--seed", "3", "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let inst = dir.join("CC1_0000.json");
    let out = carathe(&["cover", inst.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["selection_exists"], true);
    assert_eq!(rep["transversals_convert"], true);
    assert_eq!(rep["covering_lemma_holds"], true);
}

#[test]
fn tverberg_on_a_line() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "p.json", r#"{"dim":1,"points":[["1"],["2"],["3"]]}"#);
    let out = carathe(&["--jobs", "2", "tverberg", "--config", &cfg, "--r", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let sol: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(sol["labeling"], serde_json::json!([1, 2, 1]));
    assert_eq!(sol["point"], serde_json::json!(["2"]));

    let edges = write(tmp.path(), "e.json", r#"{"edges":[[1,1],[2,1],[2,2]]}"#);
    let out = carathe(&["tverberg", "--config", &cfg, "--r", "2", "--L", &edges]);
    assert_eq!(code(&out), 0);
    let sol: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(sol["labeling"], serde_json::json!([2, 1, 2]));

    let complex = write(
        tmp.path(),
        "c.json",
        r#"{"universe":[1,2,"1'","2'"],"facets":[[1,"1'"],[2,"1'"],[2,"2'"]]}"#,
    );
    let out = carathe(&["tverberg", "--config", &cfg, "--r", "2", "--L", &complex]);
    assert_eq!(code(&out), 0);
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap(), sol);
}

#[test]
fn tverberg_input_errors() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "p.json", r#"{"dim":1,"points":[["1"],["2"],["3"]]}"#);
    assert_eq!(code(&carathe(&["tverberg", "--config", &cfg, "--r", "3"])), 1);
    let disconnected = write(tmp.path(), "e.json", r#"{"edges":[[1,1],[2,2]]}"#);
    assert_eq!(code(&carathe(&["tverberg", "--config", &cfg, "--r", "2", "--L", &disconnected])), 1);
    assert_eq!(code(&carathe(&["tverberg", "--config", &cfg, "--r", "2", "--permute-anchor", "1", "1"])), 1);
}

#[test]
fn selftest_quick() {
    let tmp = TempDir::new().unwrap();
    let out = carathe(&["selftest", "--quick", "--seed", "4", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let summary = fs::read_to_string(tmp.path().join("summary.txt")).unwrap();
    assert!(!summary.contains("FAIL"));
    assert!(tmp.path().join("constrained-tverberg.json").exists());
    assert!(tmp.path().join("covering-scheme.csv").exists());
}
