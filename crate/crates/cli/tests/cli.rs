use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tlabel(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlabel"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn wheel_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(&tlabel(d, &["gen", "wheel", "12", "-o", "w.g"]));
    ok(&tlabel(d, &["label", "w.g", "-M", "12", "-o", "w.lab"]));
    let text = ok(&tlabel(d, &["verify", "w.g", "w.lab", "-d", "2", "-k", "14"]));
    assert!(text.contains("valid"));
    let lab = std::fs::read_to_string(d.join("w.lab")).unwrap();
    assert_eq!(lab.lines().count(), 13 + 24);
}

#[test]
fn tampered_labeling_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(&tlabel(d, &["gen", "wheel", "12", "-o", "w.g"]));
    ok(&tlabel(d, &["label", "w.g", "-o", "w.lab"]));
    let lab = std::fs::read_to_string(d.join("w.lab")).unwrap();
    // give the first edge the color of one of its endpoints
    let mut lines: Vec<String> = lab.lines().map(String::from).collect();
    let i = lines.iter().position(|l| l.starts_with("e ")).unwrap();
    let f: Vec<&str> = lines[i].split_whitespace().collect();
    let u = f[1].to_string();
    let cu = lines
        .iter()
        .find_map(|l| l.strip_prefix(&format!("v {u} ")).map(String::from))
        .unwrap();
    lines[i] = format!("e {} {} {cu}", f[1], f[2]);
    std::fs::write(d.join("bad.lab"), lines.join("\n")).unwrap();
    let out = tlabel(d, &["verify", "w.g", "bad.lab", "-k", "14", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["valid"], false);
    assert!(!doc["violations"].as_array().unwrap().is_empty());
}

#[test]
fn audit_json_for_the_wheel() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(&tlabel(d, &["gen", "wheel", "12", "-o", "w.g"]));
    let first = ok(&tlabel(d, &["audit", "w.g", "-M", "12", "--json"]));
    let doc: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["verdict"], "reducible");
    assert_eq!(doc["initial_total"], "-8");
    assert_eq!(doc["final_total"], "-8");
    let second = ok(&tlabel(d, &["audit", "w.g", "-M", "12", "--json"]));
    assert_eq!(first, second);
}

#[test]
fn domain_errors_exit_one_with_a_hint() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(&tlabel(d, &["gen", "star", "13", "-o", "s.g"]));
    for args in [
        &["label", "s.g", "-M", "12"][..],
        &["label", "s.g", "-M", "11"],
        &["audit", "s.g", "-M", "12"],
        &["label", "missing.g"],
        &["gen", "dodecahedron", "20"],
    ] {
        let out = tlabel(d, args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("hint:"), "{args:?}");
    }
    std::fs::write(d.join("junk.g"), "p tlabel 3 2\ne 0 1\n").unwrap();
    assert_eq!(tlabel(d, &["label", "junk.g"]).status.code(), Some(1));
}

#[test]
fn exact_and_label_json() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(&tlabel(d, &["gen", "cycle", "5", "-o", "c.g"]));
    let doc: Value = serde_json::from_str(&ok(&tlabel(d, &["exact", "c.g", "-d", "2", "--json"]))).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["lambda"], 4);
    assert_eq!(doc["witness"]["edges"].as_array().unwrap().len(), 5);
    ok(&tlabel(d, &["gen", "stacked", "60", "--seed", "3", "--max-degree", "12", "-o", "t.g"]));
    let run = ok(&tlabel(d, &["label", "t.g", "--json", "--trace", "t.json", "-o", "t.lab"]));
    let doc: Value = serde_json::from_str(&run).unwrap();
    assert!(doc["max_color"].as_u64().unwrap() <= 14);
    let trace: Value = serde_json::from_str(&std::fs::read_to_string(d.join("t.json")).unwrap()).unwrap();
    assert_eq!(trace["steps"].as_array().unwrap().len() as u64, doc["steps"].as_u64().unwrap());
    ok(&tlabel(d, &["verify", "t.g", "t.lab"]));
}

#[test]
fn bench_over_a_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    std::fs::create_dir(d.join("corpus")).unwrap();
    for seed in 0..4 {
        let name = format!("corpus/r{seed}.g");
        ok(&tlabel(d, &["gen", "random", "50", "--seed", &seed.to_string(), "-o", &name]));
    }
    let doc: Value = serde_json::from_str(&ok(&tlabel(d, &["bench", "corpus", "--json"]))).unwrap();
    assert_eq!(doc["graphs"], 4);
    assert_eq!(doc["failures"], 0);
}
