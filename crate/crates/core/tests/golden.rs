//! Frozen JSON outputs. Set `GENTLE_BLESS=1` to rewrite the files.

use std::path::PathBuf;

use gentle_derived::ar::{left_step, right_step};
use gentle_derived::hom::{analyze_words, basis_json};
use gentle_derived::quiver::parse_algebra;
use gentle_derived::words::parse_word;
use serde_json::{json, Value};

const RUNNING: &str = include_str!("../../../data/running.quiver");
const W23: &str = "(e,2,1)(f,1,0)(c,0,1)(b,1,2)(a*f,2,3)";

fn check(name: &str, actual: Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let text = serde_json::to_string_pretty(&actual).unwrap() + "\n";
    if std::env::var_os("GENTLE_BLESS").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, expected, "golden {name} differs");
}

#[test]
fn ar_traces_of_w23() {
    let alg = parse_algebra(RUNNING).unwrap();
    let w = parse_word(&alg, W23).unwrap();
    let side = |r: gentle_derived::ar::StepResult| {
        json!({
            "trace": r.trace.to_json(&alg),
            "target": r.output.map(|o| o.target.literal(&alg)),
        })
    };
    check("ar_w23.json", json!({ "word": W23, "left": side(left_step(&alg, &w)), "right": side(right_step(&alg, &w)) }));
}

#[test]
fn basis_of_worked_pair() {
    let alg = parse_algebra(RUNNING).unwrap();
    let v = parse_word(&alg, "(a,-1,0)(c,0,1)(b,1,2)").unwrap();
    let w = parse_word(&alg, "(e,2,3)(d,3,4)(a,4,3)(b,3,2)(d*c,2,1)(e,1,0)(f,0,-1)(c,-1,0)(b,0,1)(a,1,2)").unwrap();
    let (p, an) = analyze_words(&alg, &v, &w).unwrap();
    check("basis_pair.json", basis_json(&alg, &p, &an.theta));
}
