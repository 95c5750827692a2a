use std::process::Command;

fn gentle(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gentle")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn running() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/running.quiver").to_string()
}

const PAIR_V: &str = "(a,-1,0)(c,0,1)(b,1,2)";
const PAIR_W: &str = "(e,2,3)(d,3,4)(a,4,3)(b,3,2)(d*c,2,1)(e,1,0)(f,0,-1)(c,-1,0)(b,0,1)(a,1,2)";

#[test]
fn check_reports_cycle_arrows() {
    let (code, out, _) = gentle(&["check", &running()]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "gentle: OK, |C(Λ)|=6");
}

#[test]
fn check_rejects_non_gentle_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.quiver");
    std::fs::write(&path, "vertices: 0 1 2 3\narrow a: 0 -> 1\narrow b: 0 -> 2\narrow c: 0 -> 3\n").unwrap();
    let (code, _, err) = gentle(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
}

#[test]
fn homdim_of_worked_pair() {
    let (code, out, _) = gentle(&["homdim", &running(), PAIR_V, PAIR_W]);
    assert_eq!((code, out.trim()), (0, "2"));
    let (code, out, _) = gentle(&["homdim", &running(), PAIR_V, PAIR_W, "--oracle", "--field", "rational"]);
    assert_eq!((code, out.trim()), (0, "2\t2"));
}

#[test]
fn bad_word_literal_is_a_domain_error() {
    let (code, _, _) = gentle(&["homdim", &running(), "(a,0,0)", "(b,0,1)"]);
    assert_eq!(code, 1);
}

#[test]
fn basis_json_is_versioned() {
    let (code, out, _) = gentle(&["basis", &running(), PAIR_V, PAIR_W]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["dim"], 2);
    assert_eq!(doc["basis"].as_array().unwrap().len(), 2);
}

#[test]
fn discrete_table_respects_bound() {
    let (code, out, _) = gentle(&["discrete", "1", "1", "3", "--table", "--max-letters", "4"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("source\ttarget\tdim_combinatorial"));
    let dims: Vec<usize> = lines.map(|l| l.rsplit('\t').next().unwrap().parse().unwrap()).collect();
    assert!(!dims.is_empty());
    assert!(dims.iter().all(|&d| d <= 2));
}

#[test]
fn table_with_oracle_column_agrees() {
    let (code, out, _) = gentle(&["table", &running(), "--max-letters", "2", "--lo", "0", "--hi", "1", "--oracle"]);
    assert_eq!(code, 0);
    for line in out.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols[2], cols[3], "{line}");
    }
}

#[test]
fn oracle_compare_succeeds_on_running_example() {
    let (code, out, _) = gentle(&["oracle-compare", &running(), "--max-letters", "2", "--bands"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("agree:"));
}

#[test]
fn bands_grid_is_tsv() {
    let z = "(d,3,2)(e,2,1)(f,1,0)(c,0,1)(b,1,2)(a,2,3)@λ=1";
    let (code, out, _) = gentle(&["bands", &running(), z, "--r-max", "2", "--s-max", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "r\ts\tdim\tregime");
    assert_eq!(lines.len(), 5);
    let (code, out, _) = gentle(&["bands", &running(), z, "(c,0,1)"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("r\tdim_to\tdim_from"));
    // A string as the source is a domain error.
    assert_eq!(gentle(&["bands", &running(), "(c,0,1)"]).0, 1);
}

#[test]
fn ar_output_is_deterministic() {
    let args = ["ar", &running(), "--max-letters", "2", "--lo", "-1", "--hi", "1"];
    let (code, a, _) = gentle(&args);
    assert_eq!(code, 0);
    let (_, b, _) = gentle(&args);
    assert_eq!(a, b);
    assert!(a.starts_with("digraph ar {"));
    let (code, json, _) = gentle(&["ar", &running(), "--max-letters", "1", "--lo", "0", "--hi", "0", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert!(!doc["maps"].as_array().unwrap().is_empty());
}

#[test]
fn complex_exports() {
    let (code, out, _) = gentle(&["complex", &running(), "(a,-1,0)(c,0,1)", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.contains("n0 -> n1 [label=\"a\"]"));
    let (code, out, _) = gentle(&["complex", &running(), "(a,-1,0)(c,0,1)"]);
    assert_eq!(code, 0);
    serde_json::from_str::<serde_json::Value>(&out).unwrap();
}
