use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const P3: &str = r#"{"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]}"#;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcstab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn lattice_of_p3() {
    let g = scratch("p3_lattice.json", P3);
    let v = json_of(&["lattice", "--graph", g.to_str().unwrap(), "--format", "json"]);
    let mut sets: Vec<Vec<String>> = v["closed_sets"].as_array().unwrap().iter().map(strings).collect();
    for s in &mut sets {
        s.sort();
    }
    sets.sort();
    let want: Vec<Vec<String>> = vec![vec!["a", "b"], vec!["a", "b", "c"], vec!["b"], vec!["b", "c"]]
        .into_iter()
        .map(|s| s.into_iter().map(String::from).collect())
        .collect();
    assert_eq!(sets, want);
    assert_eq!(v["hasse"].as_array().unwrap().len(), 4);
}

#[test]
fn lattice_dot_export() {
    let g = scratch("p3_dot.json", P3);
    let o = run(&["lattice", "--graph", g.to_str().unwrap(), "--format", "dot"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("digraph"));
    assert_eq!(s.matches("->").count(), 4);
}

#[test]
fn order_respects_tie_break() {
    let g = scratch("p3_order.json", P3);
    let p = g.to_str().unwrap();
    let v = json_of(&["order", "--graph", p, "--format", "json"]);
    assert_eq!(strings(&v["order"]), ["a", "c", "b"]);
    let v = json_of(&["order", "--graph", p, "--format", "json", "--tie-break", "c,b,a"]);
    assert_eq!(strings(&v["order"]), ["c", "a", "b"]);
}

#[test]
fn generators_of_p3() {
    let g = scratch("p3_gens.json", P3);
    let v = json_of(&["generators", "--graph", g.to_str().unwrap(), "--format", "json"]);
    let tr: Vec<Vec<String>> = v["transvections"]
        .as_array()
        .unwrap()
        .iter()
        .map(strings)
        .collect();
    assert_eq!(tr, [["a", "b"], ["c", "b"]]);
    assert!(v["classes"].as_array().unwrap().is_empty());
}

#[test]
fn decompose_sample_and_file_round_trip() {
    let g = scratch("p3_dec.json", P3);
    let p = g.to_str().unwrap();
    let first = run(&["decompose", "--graph", p, "--seed", "7", "--format", "json"]);
    let second = run(&["decompose", "--graph", p, "--seed", "7", "--format", "json"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let m = scratch(
        "p3_matrix.json",
        r#"{"closed_set": ["a", "c", "b"], "rows": [[1, 0, 2], [0, -1, -3], [0, 0, 1]]}"#,
    );
    let atoms = json_of(&[
        "decompose",
        "--graph",
        p,
        "--input",
        m.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let w = scratch("p3_atoms.json", &atoms.to_string());
    let image = json_of(&[
        "apply",
        "--graph",
        p,
        "--input",
        w.to_str().unwrap(),
        "a",
        "--format",
        "json",
    ]);
    assert_eq!(image["image"], "a b^2");
    let image = json_of(&[
        "apply",
        "--graph",
        p,
        "--input",
        w.to_str().unwrap(),
        "c",
        "--format",
        "json",
    ]);
    assert_eq!(image["image"], "c^-1 b^-3");
}

#[test]
fn word_report() {
    let g = scratch("p3_word.json", P3);
    let v = json_of(&[
        "word",
        "--graph",
        g.to_str().unwrap(),
        "--format",
        "json",
        "c a c^-1 b",
    ]);
    assert_eq!(v["length"], 4);
    assert_eq!(v["core"], "a b");
    assert_eq!(strings(&v["alpha"]), ["a", "b", "c"]);
}

#[test]
fn factor_splits_composite() {
    let g = scratch("p3_factor.json", P3);
    let comp = scratch(
        "p3_comp.json",
        r#"[{"conj": {"x": "a", "component": ["c"]}}, {"tr": ["a", "b"]}]"#,
    );
    let v = json_of(&[
        "factor",
        "--graph",
        g.to_str().unwrap(),
        "--input",
        comp.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(v["check"], "pass");
    assert_eq!(v["phi"].as_array().unwrap().len(), 1);
}

#[test]
fn input_errors_exit_2() {
    let g = scratch("p3_err.json", P3);
    let p = g.to_str().unwrap();
    assert_eq!(run(&["word", "--graph", p, "z"]).status.code(), Some(2));
    assert_eq!(
        run(&["pattern", "--graph", p, "--closed-set", "a"]).status.code(),
        Some(2)
    );
    let bad = scratch(
        "p3_bad.json",
        r#"{"closed_set": ["a", "c", "b"], "rows": [[1, 0, 0], [0, 1, 0], [1, 0, 1]]}"#,
    );
    assert_eq!(
        run(&["decompose", "--graph", p, "--input", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let looped = scratch("loop.json", r#"{"vertices": ["a"], "edges": [["a", "a"]]}"#);
    assert_eq!(
        run(&["lattice", "--graph", looped.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["lattice"]).status.code(), Some(2));
}

#[test]
fn verify_small_exhaustive() {
    let o = run(&[
        "verify",
        "--max-vertices",
        "3",
        "--exhaustive",
        "--graphs",
        "5",
        "--samples",
        "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.starts_with("seed 0"));
    assert!(!s.contains("FAIL"));
}

#[test]
fn out_flag_writes_file() {
    let g = scratch("p3_out.json", P3);
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join("order.txt");
    let o = run(&[
        "order",
        "--graph",
        g.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(fs::read_to_string(out).unwrap().starts_with("order: a < c < b"));
}
