//! Irreducible morphisms starting at string complexes, computed by altering
//! the identity minimally at the left end (and, dually, at the right end).
//!
//! Trivial strings have two ends at the same vertex. Which letters may be
//! attached to which end is decided by the side labelling of arrow ends in
//! [`GentleAlgebra`] together with the formal-inverse flag of the trivial
//! string.

use serde::Serialize;
use thiserror::Error;

use crate::complex::node_at;
use crate::field::{FieldChoice, Scalar};
use crate::hom::{analyze_words, realize, BasisMorphism, Component, HomError, Side, Variant};
use crate::oracle::{in_span_mod_homotopy, is_null_homotopic, OracleError};
use crate::quiver::{ArrowId, GentleAlgebra, Path, VertexId};
use crate::words::{junction, Letter, Word, WordKind};
use num_traits::One;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArError {
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Steps of the left algorithm; the right algorithm reports the same steps
/// with `dual` set in the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Step {
    TwoSided,
    AddMaximalPath,
    RemoveAntipath,
    ExtendInverse,
    DropInverse,
    ShortenDirect,
    AntipathArrow,
    Zero,
    AppendAntipath,
    InfiniteAntipath,
    Finish,
}

impl Step {
    /// Step label as numbered in the algorithm.
    pub fn label(self) -> &'static str {
        match self {
            Step::TwoSided => "0",
            Step::AddMaximalPath => "1",
            Step::RemoveAntipath => "2",
            Step::ExtendInverse => "3",
            Step::DropInverse => "4",
            Step::ShortenDirect => "5",
            Step::AntipathArrow => "6",
            Step::Zero => "7",
            Step::AppendAntipath => "8",
            Step::InfiniteAntipath => "8.5",
            Step::Finish => "9",
        }
    }
}

/// Record of one run of the algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StepTrace {
    pub dual: bool,
    pub steps: Vec<Step>,
    /// Letters of the direct antipath removed at the left end.
    pub removed: Vec<Letter>,
    /// The maximal path or arrow consumed by the step that fired.
    pub consumed: Option<Path>,
    /// The inverse antipath appended at the end.
    pub appended: Vec<Letter>,
}

impl StepTrace {
    pub fn labels(&self) -> Vec<String> {
        let prime = if self.dual { "'" } else { "" };
        self.steps.iter().map(|s| format!("{}{prime}", s.label())).collect()
    }

    pub fn to_json(&self, alg: &GentleAlgebra) -> serde_json::Value {
        let letters = |ls: &[Letter]| crate::words::letters_literal(alg, ls);
        serde_json::json!({
            "dual": self.dual,
            "steps": self.labels(),
            "removed": letters(&self.removed),
            "consumed": self.consumed.as_ref().map(|p| alg.path_name(p)),
            "appended": letters(&self.appended),
        })
    }
}

/// A morphism between word complexes described by word positions: every
/// source node at position `p >= identity_from` maps identically to target
/// position `p + delta`, plus at most one extra path component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionMap {
    pub identity_from: Option<i64>,
    pub delta: i64,
    pub extra: Option<(i64, i64, Path)>,
}

/// A nonzero output of the algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArOutput {
    /// The word the map positions refer to: the input for the left
    /// algorithm, its inverse for the right one.
    pub source: Word,
    pub target: Word,
    pub map: PositionMap,
}

impl ArOutput {
    /// Components over the sides of source and target.
    pub fn morphism(&self, v: &Side, w: &Side) -> BasisMorphism {
        let find = |side: &Side, p: i64| side.nodes.iter().position(|n| n.position == p);
        let mut comps = Vec::new();
        if let Some(start) = self.map.identity_from {
            for (a, n) in v.nodes.iter().enumerate() {
                if n.position >= start {
                    if let Some(b) = find(w, n.position + self.map.delta) {
                        comps.push(Component { src: a, tgt: b, degree: n.degree, scalar: Scalar::one(), path: Path::stationary(n.vertex) });
                    }
                }
            }
        }
        if let Some((p, q, path)) = &self.map.extra {
            if let (Some(a), Some(b)) = (find(v, *p), find(w, *q)) {
                comps.push(Component { src: a, tgt: b, degree: v.nodes[a].degree, scalar: Scalar::one(), path: path.clone() });
            }
        }
        let variant = if self.map.identity_from.is_some() { Variant::Graph } else { Variant::Single };
        BasisMorphism { variant, components: comps, provenance: "irreducible".into(), representatives: Vec::new() }
    }
}

/// Result of one run of the algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    pub output: Option<ArOutput>,
    pub trace: StepTrace,
}

/// Side of a letter at its right node.
fn right_end_side(alg: &GentleAlgebra, l: &Letter) -> i8 {
    if l.is_direct() {
        alg.out_side(l.path.first().unwrap())
    } else {
        alg.in_side(l.path.last().unwrap())
    }
}

/// Side a trivial string presents at its left end.
fn trivial_left_side(w: &Word) -> i8 {
    if w.formal_inverse {
        -1
    } else {
        1
    }
}

/// Trivial string at `x` whose left end lies on side `side`.
fn trivial_with_left_side(x: VertexId, degree: i32, side: i8) -> Word {
    Word::trivial(x, degree, side != 1)
}

/// Vertex and degree of the left end of a word without left tail.
fn left_end(w: &Word) -> (VertexId, i32) {
    node_at(w, 0).expect("word has a left end")
}

/// True if `u` can be written directly to the left of `w`.
fn attaches_left(alg: &GentleAlgebra, u: &Letter, w: &Word) -> bool {
    if w.is_trivial() {
        let (x, d) = left_end(w);
        u.s() == x && u.j == d && right_end_side(alg, u) != trivial_left_side(w)
    } else {
        junction(alg, u, &w.letters[0], 0).is_ok()
    }
}

/// The path starting with arrow `b` that cannot be extended at its end.
fn longest_path_from(alg: &GentleAlgebra, b: ArrowId) -> Path {
    let mut p = alg.arrow_path(b);
    while let Some(c) = alg.nonzero_after(p.last().unwrap()) {
        p = alg.concat(&alg.arrow_path(c), &p).expect("nonzero continuation");
    }
    p
}

/// Assemble a string or right-infinite word from its letters and tail.
fn assemble(alg: &GentleAlgebra, mut core: Vec<Letter>, mut right: Vec<Letter>, trivial: Word) -> Word {
    if core.is_empty() && !right.is_empty() {
        let shift = right[0].i - right.last().unwrap().j;
        let first = right.remove(0);
        right.push(first.shifted(shift));
        core.push(first);
    }
    if core.is_empty() {
        return trivial;
    }
    if right.is_empty() {
        Word::string(alg, core).expect("algorithm keeps words valid")
    } else {
        Word::infinite(alg, Vec::new(), core, right).expect("algorithm keeps words valid")
    }
}

/// The maximal inverse antipath attachable to the left of `w`. `Err(())`
/// if it would be infinite.
fn maximal_inverse_antipath(alg: &GentleAlgebra, w: &Word) -> Result<Vec<Letter>, ()> {
    if !w.left_period.is_empty() {
        return Ok(Vec::new());
    }
    let (x, d) = left_end(w);
    let first: Vec<Letter> =
        alg.in_arrows(x).iter().map(|&b| Letter::new(alg.arrow_path(b), d + 1, d)).filter(|l| attaches_left(alg, l, w)).collect();
    debug_assert!(first.len() <= 1, "gentleness allows one continuation");
    let Some(mut cur) = first.into_iter().next() else { return Ok(Vec::new()) };
    let mut theta = vec![cur.clone()];
    loop {
        let y = cur.path.source;
        let next =
            alg.in_arrows(y).iter().map(|&c| Letter::new(alg.arrow_path(c), cur.i + 1, cur.i)).find(|l| junction(alg, l, &cur, 0).is_ok());
        match next {
            None => break,
            Some(l) => {
                if theta.len() > alg.num_arrows() {
                    return Err(());
                }
                theta.push(l.clone());
                cur = l;
            }
        }
    }
    theta.reverse();
    Ok(theta)
}

/// The left algorithm, including the step for infinite antipaths.
pub fn left_step(alg: &GentleAlgebra, w: &Word) -> StepResult {
    let mut trace = StepTrace::default();
    let zero = |mut trace: StepTrace, s: Step| {
        trace.steps.push(s);
        StepResult { output: None, trace }
    };
    if w.kind == WordKind::TwoSidedInfinite || w.kind == WordKind::Band {
        return zero(trace, Step::TwoSided);
    }
    let right_tail = w.right_period.clone();
    let left_infinite = !w.left_period.is_empty();

    // Step 1.
    if !left_infinite {
        let (x, d) = left_end(w);
        let cands: Vec<Letter> = alg
            .out_arrows(x)
            .iter()
            .map(|&b| longest_path_from(alg, b))
            .map(|u| Letter::new(u, d - 1, d))
            .filter(|u| attaches_left(alg, u, w))
            .collect();
        debug_assert!(cands.len() <= 1);
        if let Some(u) = cands.into_iter().next() {
            trace.steps.push(Step::AddMaximalPath);
            trace.consumed = Some(u.path.clone());
            let mut core = vec![u];
            let trivial = w.is_trivial();
            if !trivial {
                core.extend(w.letters.iter().cloned());
            }
            let wp = assemble(alg, core, right_tail, w.clone());
            let map = PositionMap { identity_from: Some(0), delta: 1, extra: None };
            return finish_with_antipath(alg, w, wp, map, trace);
        }
    }

    // Step 2.
    trace.steps.push(Step::RemoveAntipath);
    let letters: &[Letter] = if w.is_trivial() { &[] } else { &w.letters };
    let m = letters.iter().take_while(|l| l.is_direct() && l.is_arrow()).count();
    trace.removed = w.left_period.iter().chain(letters[..m].iter()).cloned().collect();

    if m < letters.len() {
        let wr = &letters[m];
        let rest: Vec<Letter> = letters[m + 1..].to_vec();
        if wr.is_inverse() {
            let first = wr.path.first().unwrap();
            if let Some(a) = alg.nonzero_before(first) {
                // Step 3.
                trace.steps.push(Step::ExtendInverse);
                let ap = alg.arrow_path(a);
                trace.consumed = Some(ap.clone());
                let path = alg.concat(&wr.path, &ap).expect("nonzero by choice of a");
                let mut core = vec![Letter::new(path, wr.i, wr.j)];
                core.extend(rest);
                let wp = assemble(alg, core, right_tail, w.clone());
                let map = PositionMap { identity_from: Some(m as i64 + 1), delta: -(m as i64), extra: Some((m as i64, 0, ap)) };
                return finish_with_antipath(alg, w, wp, map, trace);
            }
            // Step 4, then straight to Step 9.
            trace.steps.push(Step::DropInverse);
            let trivial = trivial_with_left_side(wr.s(), wr.j, -right_end_side(alg, wr));
            let wp = assemble(alg, rest, right_tail, trivial);
            let map = PositionMap { identity_from: Some(m as i64 + 1), delta: -(m as i64 + 1), extra: None };
            trace.steps.push(Step::Finish);
            return StepResult { output: Some(ArOutput { source: w.clone(), target: wp, map }), trace };
        }
        // Step 5: a direct letter outside the antipath has length at least two.
        trace.steps.push(Step::ShortenDirect);
        debug_assert!(wr.path.len() >= 2);
        let a = *wr.path.arrows.last().unwrap();
        let ap = alg.arrow_path(a);
        trace.consumed = Some(ap.clone());
        let rest_path = alg.path_from_arrows(wr.path.arrows[..wr.path.len() - 1].to_vec()).unwrap();
        let mut core = vec![Letter::new(rest_path, wr.i, wr.j)];
        core.extend(rest);
        let wp = assemble(alg, core, right_tail, w.clone());
        let map = PositionMap { identity_from: Some(m as i64 + 1), delta: -(m as i64), extra: Some((m as i64, 0, ap)) };
        return finish_with_antipath(alg, w, wp, map, trace);
    }

    // Step 6: the whole word is a direct antipath.
    if right_tail.is_empty() {
        let n = letters.len() as i64;
        let (x, d) = node_at(w, n).expect("right end");
        let end_side = match letters.last() {
            Some(l) => right_end_side(alg, l),
            None => trivial_left_side(w),
        };
        let a = alg.in_arrows(x).iter().copied().find(|&a| match letters.last() {
            Some(l) => alg.is_zero_pair(a, l.path.first().unwrap()),
            None => alg.in_side(a) != end_side,
        });
        if let Some(a) = a {
            trace.steps.push(Step::AntipathArrow);
            let ap = alg.arrow_path(a);
            trace.consumed = Some(ap.clone());
            let wp = trivial_with_left_side(ap.source, d, alg.out_side(a));
            let map = PositionMap { identity_from: None, delta: 0, extra: Some((n, 0, ap)) };
            return finish_with_antipath(alg, w, wp, map, trace);
        }
    }

    // Step 7.
    zero(trace, Step::Zero)
}

fn finish_with_antipath(alg: &GentleAlgebra, w: &Word, wp: Word, mut map: PositionMap, mut trace: StepTrace) -> StepResult {
    match maximal_inverse_antipath(alg, &wp) {
        Err(()) => {
            trace.steps.push(Step::InfiniteAntipath);
            StepResult { output: None, trace }
        }
        Ok(theta) if theta.is_empty() => {
            trace.steps.push(Step::Finish);
            StepResult { output: Some(ArOutput { source: w.clone(), target: wp, map }), trace }
        }
        Ok(theta) => {
            trace.steps.push(Step::AppendAntipath);
            let k = theta.len() as i64;
            let mut core = theta.clone();
            if !wp.is_trivial() {
                core.extend(wp.letters.iter().cloned());
            }
            trace.appended = theta;
            let target = assemble(alg, core, wp.right_period.clone(), wp.clone());
            map.delta += k;
            if let Some((p, q, path)) = map.extra.take() {
                map.extra = Some((p, q + k, path));
            }
            StepResult { output: Some(ArOutput { source: w.clone(), target, map }), trace }
        }
    }
}

/// The right algorithm: the left one applied to the inverse word.
pub fn right_step(alg: &GentleAlgebra, w: &Word) -> StepResult {
    let mut r = left_step(alg, &w.inverse());
    r.trace.dual = true;
    r
}

/// The same left algorithm; named for its use on one-sided infinite words.
pub fn resolve_infinite_step(alg: &GentleAlgebra, w: &Word) -> StepResult {
    left_step(alg, w)
}

/// Nonzero outputs of both algorithms.
pub fn irreducible_maps(alg: &GentleAlgebra, w: &Word) -> Vec<(ArOutput, StepTrace)> {
    let mut out: Vec<(ArOutput, StepTrace)> = Vec::new();
    for r in [left_step(alg, w), right_step(alg, w)] {
        if let Some(o) = r.output {
            let dup = out.iter().any(|(p, _)| p.target == o.target && p.source == o.source && p.map == o.map);
            if !dup {
                out.push((o, r.trace));
            }
        }
    }
    out
}

/// Why a morphism is visibly reducible, or `None`.
pub fn is_obviously_reducible(alg: &GentleAlgebra, f: &BasisMorphism, v: &Side, w: &Side) -> Option<&'static str> {
    let _ = alg;
    let nonstat: Vec<&Component> = f.components.iter().filter(|c| !c.path.is_stationary()).collect();
    match f.variant {
        Variant::Double | Variant::SingletonDouble => return Some("double map"),
        Variant::Graph => {
            if nonstat.len() >= 2 {
                return Some("graph map with two non-isomorphism ends");
            }
            if nonstat.iter().any(|c| c.path.len() >= 2) {
                return Some("end component factors through an arrow");
            }
            return None;
        }
        Variant::Single | Variant::SingletonSingle | Variant::QuasiRep => {}
    }
    if f.components.len() != 1 {
        return Some("not a single map");
    }
    let c = &f.components[0];
    if c.path.len() >= 2 {
        return Some("component factors through an arrow");
    }
    let (a, b) = (c.src, c.tgt);
    let v_edges: Vec<&crate::hom::DEdge> = v.edges.iter().filter(|e| e.low == a || e.high == a).collect();
    let w_edges: Vec<&crate::hom::DEdge> = w.edges.iter().filter(|e| e.low == b || e.high == b).collect();
    if v_edges.len() >= 2 || (v_edges.len() == 1 && v_edges[0].low == a) {
        return Some("source node has an outgoing or a second differential");
    }
    if w_edges.len() >= 2 || (w_edges.len() == 1 && w_edges[0].high == b) {
        return Some("target node has an incoming or a second differential");
    }
    let uniform = |s: &Side| s.edges.is_empty() || s.edges.windows(2).all(|p| (p[0].low < p[0].high) == (p[1].low < p[1].high));
    if !uniform(v) || !uniform(w) {
        return Some("a word is not uniformly oriented");
    }
    if v.edges.iter().chain(w.edges.iter()).any(|e| e.path.len() >= 2) {
        return Some("a letter is longer than one arrow");
    }
    None
}

/// True if the morphism is an isomorphism: identity components matching
/// every node of both sides.
pub fn is_isomorphism(f: &BasisMorphism, v: &Side, w: &Side) -> bool {
    f.variant == Variant::Graph
        && f.components.iter().all(|c| c.path.is_stationary())
        && f.components.len() == v.nodes.len()
        && v.nodes.len() == w.nodes.len()
}

/// An arrow of the AR quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArEdge {
    pub source_key: String,
    pub target_key: String,
    pub trace: StepTrace,
}

/// AR arrows starting at each of the given words.
pub fn ar_edges(alg: &GentleAlgebra, words: &[Word]) -> Vec<ArEdge> {
    let mut edges = Vec::new();
    for w in words {
        for (o, trace) in irreducible_maps(alg, w) {
            edges.push(ArEdge { source_key: w.canonical_key(alg), target_key: o.target.canonical_key(alg), trace });
        }
    }
    edges.sort_by(|a, b| (&a.source_key, &a.target_key, a.trace.dual).cmp(&(&b.source_key, &b.target_key, b.trace.dual)));
    edges
}

/// DOT rendering of AR arrows.
pub fn ar_dot(edges: &[ArEdge]) -> String {
    let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
    let mut nodes: Vec<&str> = edges.iter().flat_map(|e| [e.source_key.as_str(), e.target_key.as_str()]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    let mut s = String::from("digraph ar {\n");
    for n in nodes {
        s.push_str(&format!("  \"{}\";\n", esc(n)));
    }
    for e in edges {
        s.push_str(&format!("  \"{}\" -> \"{}\" [label=\"{}\"];\n", esc(&e.source_key), esc(&e.target_key), e.trace.labels().join(",")));
    }
    s.push_str("}\n");
    s
}

/// The arrow `a` used by a single-arrow position map, for reporting.
pub fn consumed_arrow(trace: &StepTrace) -> Option<ArrowId> {
    trace.consumed.as_ref().filter(|p| p.len() == 1).and_then(|p| p.first())
}

/// True if the output is a nonzero multiple, up to homotopy, of an element
/// of the canonical basis between its source and target.
pub fn matches_basis_element(alg: &GentleAlgebra, out: &ArOutput, field: FieldChoice) -> Result<bool, ArError> {
    let (p, an) = analyze_words(alg, &out.source, &out.target)?;
    let f = realize(&out.morphism(&p.v, &p.w), &p.v, &p.w);
    if is_null_homotopic(alg, &p.v.complex, &p.w.complex, &f, field)? {
        return Ok(false);
    }
    for t in &an.theta {
        let g = realize(t, &p.v, &p.w);
        if in_span_mod_homotopy(alg, &p.v.complex, &p.w.complex, &[g], &f, field)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// True if the output factors, up to homotopy, as a sum of composites of two
/// non-isomorphisms through the complexes of `window`.
pub fn factors_through_window(alg: &GentleAlgebra, out: &ArOutput, window: &[Word], field: FieldChoice) -> Result<bool, ArError> {
    let (p, _) = analyze_words(alg, &out.source, &out.target)?;
    let f = realize(&out.morphism(&p.v, &p.w), &p.v, &p.w);
    let mut composites = Vec::new();
    for u in window {
        let (p1, a1) = analyze_words(alg, &out.source, u)?;
        let firsts: Vec<_> = a1.theta.iter().filter(|h| !is_isomorphism(h, &p1.v, &p1.w)).map(|h| realize(h, &p1.v, &p1.w)).collect();
        if firsts.is_empty() {
            continue;
        }
        let (p2, a2) = analyze_words(alg, u, &out.target)?;
        for g in a2.theta.iter().filter(|g| !is_isomorphism(g, &p2.v, &p2.w)) {
            let g = realize(g, &p2.v, &p2.w);
            for h in &firsts {
                let c = h.then(alg, &g);
                if !c.is_zero() {
                    composites.push(c);
                }
            }
        }
    }
    Ok(in_span_mod_homotopy(alg, &p.v.complex, &p.w.complex, &composites, &f, field)?)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::words::tests::{running, W23};
    use crate::words::{enumerate_words, parse_word, resolve_infinite};

    fn keys(alg: &GentleAlgebra, outs: &[(ArOutput, StepTrace)]) -> BTreeSet<String> {
        outs.iter().map(|(o, _)| o.target.canonical_key(alg)).collect()
    }

    #[test]
    fn every_string_has_one_or_two_basis_outputs() {
        let alg = running();
        let (strings, _) = enumerate_words(&alg, 3, -1, 1);
        for w in &strings {
            let outs = irreducible_maps(&alg, w);
            assert!((1..=2).contains(&outs.len()), "{}", w.literal(&alg));
            for (o, t) in &outs {
                assert!(matches_basis_element(&alg, o, FieldChoice::default()).unwrap(), "{} {:?}", w.literal(&alg), t.labels());
                let (p, _) = analyze_words(&alg, &o.source, &o.target).unwrap();
                let f = o.morphism(&p.v, &p.w);
                assert_eq!(is_obviously_reducible(&alg, &f, &p.v, &p.w), None);
                assert!(!is_isomorphism(&f, &p.v, &p.w));
            }
        }
    }

    #[test]
    fn outputs_do_not_factor_through_small_window() {
        let alg = running();
        let (strings, _) = enumerate_words(&alg, 2, -1, 1);
        let (window, _) = enumerate_words(&alg, 3, -2, 2);
        for w in &strings {
            for (o, _) in irreducible_maps(&alg, w) {
                assert!(!factors_through_window(&alg, &o, &window, FieldChoice::default()).unwrap(), "{}", w.literal(&alg));
            }
        }
    }

    /// Every basis element out of `w` that does not factor through the window
    /// points at an output of the algorithm.
    #[test]
    fn window_irreducibles_are_outputs() {
        let alg = running();
        let (strings, _) = enumerate_words(&alg, 1, -1, 1);
        let (window, _) = enumerate_words(&alg, 3, -2, 2);
        for w in &strings {
            let want = keys(&alg, &irreducible_maps(&alg, w));
            let mut found = BTreeSet::new();
            for u in &window {
                let (p, an) = analyze_words(&alg, w, u).unwrap();
                for t in an.theta.iter().filter(|t| !is_isomorphism(t, &p.v, &p.w)) {
                    let f = realize(t, &p.v, &p.w);
                    let mut comps = Vec::new();
                    for x in &window {
                        let (p1, a1) = analyze_words(&alg, w, x).unwrap();
                        let (p2, a2) = analyze_words(&alg, x, u).unwrap();
                        for h in a1.theta.iter().filter(|h| !is_isomorphism(h, &p1.v, &p1.w)) {
                            for g in a2.theta.iter().filter(|g| !is_isomorphism(g, &p2.v, &p2.w)) {
                                comps.push(realize(h, &p1.v, &p1.w).then(&alg, &realize(g, &p2.v, &p2.w)));
                            }
                        }
                    }
                    if !in_span_mod_homotopy(&alg, &p.v.complex, &p.w.complex, &comps, &f, FieldChoice::default()).unwrap() {
                        found.insert(u.canonical_key(&alg));
                    }
                }
            }
            assert!(found.is_subset(&want), "{}: {found:?} vs {want:?}", w.literal(&alg));
            let in_window: BTreeSet<String> = window.iter().map(|u| u.canonical_key(&alg)).collect();
            assert_eq!(found, want.intersection(&in_window).cloned().collect(), "{}", w.literal(&alg));
        }
    }

    #[test]
    fn golden_outputs_for_w23() {
        let alg = running();
        let w = parse_word(&alg, W23).unwrap();
        let l = left_step(&alg, &w);
        assert_eq!(l.trace.labels(), ["2", "4", "9"]);
        assert_eq!(l.output.unwrap().target.literal(&alg), "(f,1,0)(c,0,1)(b,1,2)(a*f,2,3)");
        let r = right_step(&alg, &w);
        assert_eq!(r.trace.labels(), ["2'", "4'", "9'"]);
        assert_eq!(r.output.unwrap().target.literal(&alg), "(b,2,1)(c,1,0)(f,0,1)(e,1,2)");
    }

    #[test]
    fn trivial_string_attaches_one_arrow_per_side() {
        let alg = running();
        let w = parse_word(&alg, "(1_0,0,0)").unwrap();
        let outs = irreducible_maps(&alg, &w);
        let want: BTreeSet<String> = ["(a,-1,0)", "(d,-1,0)"].iter().map(|s| parse_word(&alg, s).unwrap().canonical_key(&alg)).collect();
        assert_eq!(keys(&alg, &outs), want);
        assert!(outs.iter().all(|(_, t)| t.steps[0] == Step::AddMaximalPath));
        // The formal inverse swaps the two ends.
        let flipped = w.inverse();
        let l = left_step(&alg, &flipped).output.unwrap().target.canonical_key(&alg);
        let r = right_step(&alg, &w).output.unwrap().target.canonical_key(&alg);
        assert_eq!(l, r);
    }

    #[test]
    fn right_step_is_left_step_of_inverse() {
        let alg = running();
        let (strings, _) = enumerate_words(&alg, 3, -1, 1);
        for w in &strings {
            let a = right_step(&alg, w);
            let b = left_step(&alg, &w.inverse());
            assert_eq!(a.output, b.output);
            assert_eq!(a.trace.steps, b.trace.steps);
            assert!(a.trace.dual && !b.trace.dual);
        }
    }

    #[test]
    fn infinite_words() {
        let alg = running();
        let (strings, _) = enumerate_words(&alg, 2, -1, 1);
        let mut seen = 0;
        for w in strings.iter().filter_map(|w| resolve_infinite(&alg, w).ok()) {
            for r in [left_step(&alg, &w), right_step(&alg, &w)] {
                let src = if r.trace.dual { w.inverse() } else { w.clone() };
                match src.kind {
                    WordKind::TwoSidedInfinite => assert_eq!(r.trace.steps, [Step::TwoSided]),
                    WordKind::LeftInfinite => {
                        assert!(r.output.is_none());
                        assert_eq!(r.trace.steps.last(), Some(&Step::InfiniteAntipath));
                    }
                    WordKind::RightInfinite => {
                        if let Some(o) = r.output {
                            assert_eq!(o.target.kind, WordKind::RightInfinite);
                            seen += 1;
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
        assert!(seen > 0);
    }

    /// A finite string can meet an infinite antipath on a cycle with full
    /// relations; the other end then still yields a map.
    #[test]
    fn infinite_antipath_blocks_at_most_one_end() {
        let alg = running();
        let (strings, _) = enumerate_words(&alg, 4, -2, 2);
        let mut blocked = 0;
        for w in &strings {
            let (l, r) = (left_step(&alg, w), right_step(&alg, w));
            for (a, b) in [(&l, &r), (&r, &l)] {
                if a.trace.steps.contains(&Step::InfiniteAntipath) {
                    blocked += 1;
                    assert!(b.output.is_some(), "{}", w.literal(&alg));
                }
            }
        }
        assert!(blocked > 0);
        let p1 = parse_word(&alg, "(1_1,0,0)").unwrap();
        assert_eq!(left_step(&alg, &p1).trace.steps.last(), Some(&Step::InfiniteAntipath));
    }

    #[test]
    fn bands_have_no_outputs_here() {
        let alg = running();
        let z = parse_word(&alg, crate::words::tests::Z).unwrap();
        assert!(irreducible_maps(&alg, &z).is_empty());
    }

    #[test]
    fn dot_lists_edges() {
        let alg = running();
        let w = parse_word(&alg, "(1_0,0,0)").unwrap();
        let edges = ar_edges(&alg, &[w]);
        assert_eq!(edges.len(), 2);
        let dot = ar_dot(&edges);
        assert!(dot.starts_with("digraph ar {"));
        assert_eq!(dot.matches("->").count(), 2);
    }
}
