use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pmcsolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmcsolve")).args(args).output().expect("run pmcsolve")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const C4: &str = "p tw 4 4\n1 2\n2 3\n3 4\n4 1\n";
const C6: &str = "p tw 6 6\n1 2\n2 3\n3 4\n4 5\n5 6\n6 1\n";

#[test]
fn forest_on_c4() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.gr", C4);
    let out = pmcsolve(&["solve", "--problem", "max-induced-forest", "--input", &c4, "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 3);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["F"].as_array().unwrap().len(), 3);
    assert_eq!(v["stats"]["separators"], 2);
    assert_eq!(v["stats"]["pmcs"], 4);
    assert_eq!(v["stats"]["ms"], 0);
}

#[test]
fn independent_set_on_complete_graph() {
    let out = pmcsolve(&["solve", "--problem", "max-independent-set", "--generate", "complete:n=5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 1);
}

#[test]
fn connected_terminals_on_c6() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = write(dir.path(), "c6.gr", C6);
    let out = pmcsolve(&["solve", "--problem", "connected", "--terminals", "1,4", "--mode", "min", "--input", &c6]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["problem"], "connected:T=1,4");
    assert_eq!(v["value"], 4);
}

#[test]
fn edge_list_and_weights() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.txt", "1 2\n2 3\n");
    let w = write(dir.path(), "w.txt", "2 5\n");
    let out = pmcsolve(&["solve", "--problem", "independent-set", "--input", &p3, "--weights-file", &w]);
    let v = json(&out);
    assert_eq!(v["value"], 5);
    assert_eq!(v["X"], serde_json::json!([2]));
}

#[test]
fn text_format() {
    let out = pmcsolve(&["solve", "--problem", "forest", "--generate", "cycle:n=5", "--format", "text"]);
    let text = stdout(&out);
    assert!(text.contains("value: 4"), "{text}");
    assert!(text.starts_with("problem: forest"), "{text}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["solve", "--problem", "max-induced-forest", "--generate", "gnp:n=14,p=0.3", "--seed", "5", "--no-timing"];
    let dir = tempfile::tempdir().unwrap();
    let dumps: Vec<String> = (0..2).map(|i| dir.path().join(format!("t{i}")).to_str().unwrap().to_owned()).collect();
    let a = pmcsolve(&[&args[..], &["--dump-tables", &dumps[0]]].concat());
    let b = pmcsolve(&[&args[..], &["--dump-tables", &dumps[1]]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let (ta, tb) = (std::fs::read(&dumps[0]).unwrap(), std::fs::read(&dumps[1]).unwrap());
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["solve", "--problem", "triangle-packing", "--generate", "gnp:n=16,p=0.4", "--seed", "2", "--no-timing"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_pmcsolve")).args(args).env("PMCSOLVE_THREADS", threads).output().unwrap()
    };
    assert_eq!(run("1").stdout, run("4").stdout);
}

#[test]
fn enumerate_c4() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.gr", C4);
    let seps = pmcsolve(&["enumerate", "--separators", "--input", &c4]);
    assert_eq!(stdout(&seps), "1 3\n2 4\n");
    let pmcs = pmcsolve(&["enumerate", "--pmcs", "--input", &c4]);
    assert_eq!(stdout(&pmcs).lines().count(), 4);
    let stats = pmcsolve(&["enumerate", "--stats", "--pmcs", "--input", &c4]);
    assert!(stdout(&stats).contains("4 ≤ 25: ok"), "{}", stdout(&stats));
}

#[test]
fn exit_codes() {
    let infeasible = pmcsolve(&["solve", "--problem", "independent-set", "--generate", "cycle:n=5", "--exact-size", "3"]);
    assert_eq!(infeasible.status.code(), Some(2));
    let v = json(&infeasible);
    assert_eq!(v["feasible"], false);
    assert_eq!(v["value"], Value::Null);

    let budget = pmcsolve(&["solve", "--problem", "forest", "--generate", "gnp:n=20,p=0.5", "--budget-pmcs", "5"]);
    assert_eq!(budget.status.code(), Some(3));
    assert!(budget.stdout.is_empty());

    assert_eq!(pmcsolve(&["solve", "--problem", "no-such-problem", "--generate", "cycle:n=4"]).status.code(), Some(1));
    assert_eq!(pmcsolve(&["solve", "--input", "/nonexistent.gr", "--problem", "forest"]).status.code(), Some(1));
    assert_eq!(pmcsolve(&["frobnicate"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.gr", "p tw 3 1\n1 7\n");
    assert_eq!(pmcsolve(&["solve", "--problem", "forest", "--input", &bad]).status.code(), Some(1));
}

#[test]
fn generate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.gr");
    let out = pmcsolve(&["generate", "k-tree:n=12,k=2", "--seed", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("p tw 12 "));
    let solved = pmcsolve(&["solve", "--problem", "true:t=2", "--input", path.to_str().unwrap()]);
    assert_eq!(json(&solved)["value"], 12);
}

#[test]
fn verify_suites() {
    for suite in ["engine", "enumeration", "automata"] {
        let out = pmcsolve(&["verify", "--suite", suite, "--sizes", "4-5", "--instances", "1"]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
        for line in stdout(&out).lines() {
            let v: Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["agree"], true, "{line}");
        }
    }
    for lemma in ["terminal-tw", "triangulation-extension"] {
        let out = pmcsolve(&["verify", "--lemma", lemma, "--sizes", "4-7", "--instances", "2"]);
        assert_eq!(out.status.code(), Some(0), "{lemma}");
    }
    let fault = pmcsolve(&["verify", "--suite", "engine", "--sizes", "4", "--instances", "1", "--inject-fault"]);
    assert_eq!(fault.status.code(), Some(4));
}
