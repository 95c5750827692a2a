//! Complexes of indecomposable projectives built from homotopy words, graded
//! maps between them and their unfolded diagrams.
//!
//! A map component from the summand P(x) to P(y) is a path from y to x.
//! Entries of a graded map of degree `k` in degree `i` have their row in the
//! source at degree `i` and their column in the target at degree `i + k`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::field::{format_scalar, Scalar};
use crate::quiver::{GentleAlgebra, Path, VertexId};
use crate::words::{Letter, Word, WordKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("differential squares to a nonzero map in degree {0}")]
    D2NotZero(i32),
    #[error("infinite words need a degree cutoff")]
    CutoffRequired,
    #[error("chain map realization failed: {0}")]
    RealizationMismatch(String),
}

/// One matrix entry `scalar * path`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub scalar: Scalar,
    pub path: Path,
}

/// A graded map whose degree-`i` block goes from source degree `i` to
/// target degree `i + shift`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedMap {
    pub shift: i32,
    pub blocks: BTreeMap<i32, Vec<Entry>>,
}

/// A formal linear combination of paths.
pub type PathSum = BTreeMap<Path, Scalar>;

fn add_term(sum: &mut PathSum, p: Path, c: Scalar) {
    let e = sum.entry(p.clone()).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        sum.remove(&p);
    }
}

impl GradedMap {
    pub fn new(shift: i32) -> Self {
        GradedMap { shift, blocks: BTreeMap::new() }
    }

    pub fn push(&mut self, degree: i32, e: Entry) {
        self.blocks.entry(degree).or_default().push(e);
    }

    /// Apply `self` then `other`.
    pub fn then(&self, alg: &GentleAlgebra, other: &GradedMap) -> GradedMap {
        let mut out = GradedMap::new(self.shift + other.shift);
        for (&i, es) in &self.blocks {
            let Some(os) = other.blocks.get(&(i + self.shift)) else { continue };
            let mut acc: BTreeMap<(usize, usize), PathSum> = BTreeMap::new();
            for e in es {
                for o in os.iter().filter(|o| o.row == e.col) {
                    if let Some(p) = alg.concat(&e.path, &o.path) {
                        add_term(acc.entry((e.row, o.col)).or_default(), p, &e.scalar * &o.scalar);
                    }
                }
            }
            for ((row, col), sum) in acc {
                for (path, scalar) in sum {
                    out.push(i, Entry { row, col, scalar, path });
                }
            }
        }
        out
    }

    /// Entrywise combination `self + c * other`.
    pub fn add_scaled(&self, other: &GradedMap, c: &Scalar) -> GradedMap {
        let mut acc: BTreeMap<(i32, usize, usize), PathSum> = BTreeMap::new();
        for (&i, es) in &self.blocks {
            for e in es {
                add_term(acc.entry((i, e.row, e.col)).or_default(), e.path.clone(), e.scalar.clone());
            }
        }
        for (&i, es) in &other.blocks {
            for e in es {
                add_term(acc.entry((i, e.row, e.col)).or_default(), e.path.clone(), &e.scalar * c);
            }
        }
        let mut out = GradedMap::new(self.shift);
        for ((i, row, col), sum) in acc {
            for (path, scalar) in sum {
                out.push(i, Entry { row, col, scalar, path });
            }
        }
        out
    }

    /// Collected nonzero coefficients keyed by degree, row, column and path.
    pub fn coefficients(&self) -> BTreeMap<(i32, usize, usize, Path), Scalar> {
        let mut acc: BTreeMap<(i32, usize, usize), PathSum> = BTreeMap::new();
        for (&i, es) in &self.blocks {
            for e in es {
                add_term(acc.entry((i, e.row, e.col)).or_default(), e.path.clone(), e.scalar.clone());
            }
        }
        let mut out = BTreeMap::new();
        for ((i, r, c), sum) in acc {
            for (p, s) in sum {
                out.insert((i, r, c, p), s);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients().is_empty()
    }

    pub fn scaled(&self, c: &Scalar) -> GradedMap {
        GradedMap::new(self.shift).add_scaled(self, c)
    }
}

/// A node of an unfolded diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramNode {
    pub vertex: VertexId,
    pub degree: i32,
    pub layer: usize,
    /// Position along the word.
    pub position: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Letter,
    Link,
}

/// An edge of an unfolded diagram, pointing along the differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramEdge {
    pub from: usize,
    pub to: usize,
    pub path: Path,
    pub scalar: Scalar,
    pub kind: EdgeKind,
}

/// The picture of a word: nodes in written order, one edge per letter, and
/// link edges between layers for higher bands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnfoldedDiagram {
    pub nodes: Vec<DiagramNode>,
    pub edges: Vec<DiagramEdge>,
    pub cyclic: bool,
}

/// A bounded complex of indecomposable projectives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjComplex {
    /// Summand vertices per degree in slot order.
    pub modules: BTreeMap<i32, Vec<VertexId>>,
    /// Differential, a graded map of shift 1.
    pub differential: GradedMap,
    /// Slot of every diagram node: `(degree, slot)`.
    pub node_slot: Vec<(i32, usize)>,
    pub diagram: UnfoldedDiagram,
    /// Literal of the word the complex came from.
    pub provenance: String,
    /// Set when an infinite word was cut off below some degree.
    pub truncated: bool,
}

impl ProjComplex {
    pub fn vertex(&self, degree: i32, slot: usize) -> VertexId {
        self.modules[&degree][slot]
    }
    pub fn size(&self, degree: i32) -> usize {
        self.modules.get(&degree).map_or(0, Vec::len)
    }
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.modules.keys().copied()
    }
    pub fn min_degree(&self) -> Option<i32> {
        self.modules.keys().next().copied()
    }
    pub fn max_degree(&self) -> Option<i32> {
        self.modules.keys().next_back().copied()
    }
    pub fn total_rank(&self) -> usize {
        self.modules.values().map(Vec::len).sum()
    }

    /// Slot of the node at a word position in layer 0.
    pub fn slot_of_position(&self, position: i64) -> Option<(i32, usize)> {
        self.diagram.nodes.iter().position(|n| n.position == position && n.layer == 0).map(|k| self.node_slot[k])
    }

    /// Check that the differential squares to zero.
    pub fn check_d2(&self, alg: &GentleAlgebra) -> Result<(), ComplexError> {
        let dd = self.differential.then(alg, &self.differential);
        match dd.coefficients().keys().next() {
            Some((i, ..)) => Err(ComplexError::D2NotZero(*i)),
            None => Ok(()),
        }
    }

    /// The identity chain map.
    pub fn identity(&self) -> GradedMap {
        let mut m = GradedMap::new(0);
        for (&i, vs) in &self.modules {
            for (s, &v) in vs.iter().enumerate() {
                m.push(i, Entry { row: s, col: s, scalar: Scalar::one(), path: Path::stationary(v) });
            }
        }
        m
    }

    /// The complex with every degree lowered by `k`.
    pub fn shifted(&self, k: i32) -> ProjComplex {
        let mut c = self.clone();
        c.modules = self.modules.iter().map(|(&i, v)| (i - k, v.clone())).collect();
        c.differential.blocks = self.differential.blocks.iter().map(|(&i, v)| (i - k, v.clone())).collect();
        c.node_slot = self.node_slot.iter().map(|&(i, s)| (i - k, s)).collect();
        for n in c.diagram.nodes.iter_mut() {
            n.degree -= k;
        }
        c
    }

    pub fn to_json(&self, alg: &GentleAlgebra) -> serde_json::Value {
        let degrees: Vec<_> = self
            .modules
            .iter()
            .map(|(i, vs)| {
                serde_json::json!({
                    "degree": i,
                    "modules": vs.iter().map(|&v| alg.vertex_name(v)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let diffs: Vec<_> = self
            .differential
            .blocks
            .iter()
            .map(|(i, es)| {
                serde_json::json!({
                    "degree": i,
                    "entries": es.iter().map(|e| entry_json(alg, e)).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "schema_version": crate::SCHEMA_VERSION,
            "word": self.provenance,
            "degrees": degrees,
            "differentials": diffs,
        })
    }
}

pub fn entry_json(alg: &GentleAlgebra, e: &Entry) -> serde_json::Value {
    serde_json::json!({
        "row": e.row,
        "col": e.col,
        "scalar": format_scalar(&e.scalar),
        "path": alg.path_name(&e.path),
    })
}

/// Positions of the nodes of a word, truncated below `cutoff` for infinite words.
fn node_positions(w: &Word, cutoff: Option<i32>) -> Result<Vec<i64>, ComplexError> {
    let n = w.letters.len() as i64;
    match w.kind {
        WordKind::String if w.is_trivial() => Ok(vec![0]),
        WordKind::String => Ok((0..=n).collect()),
        WordKind::Band => Ok((0..n).collect()),
        _ => {
            let cutoff = cutoff.ok_or(ComplexError::CutoffRequired)?;
            let mut lo = 0;
            while !w.left_period.is_empty() && w.letter_at(lo - 1).unwrap().i >= cutoff {
                lo -= 1;
            }
            let mut hi = n;
            while !w.right_period.is_empty() && w.letter_at(hi).unwrap().j >= cutoff {
                hi += 1;
            }
            Ok((lo..=hi).collect())
        }
    }
}

/// Vertex and degree of the node at a word position.
pub fn node_at(w: &Word, k: i64) -> Option<(VertexId, i32)> {
    if w.is_trivial() {
        return (k == 0).then(|| (w.letters[0].path.source, w.letters[0].i));
    }
    if let Some(l) = w.letter_at(k) {
        return Some((l.t(), l.i));
    }
    w.letter_at(k - 1).map(|l| (l.s(), l.j))
}

/// Build the complex of a word (r layers for a band of dimension r).
pub fn build_complex(alg: &GentleAlgebra, w: &Word, cutoff: Option<i32>) -> Result<ProjComplex, ComplexError> {
    let positions = node_positions(w, cutoff)?;
    let layers = if w.kind == WordKind::Band { w.dim } else { 1 };
    let n = w.letters.len() as i64;
    // Slots: layer-major, then descending word position.
    let mut per_layer: BTreeMap<i32, Vec<i64>> = BTreeMap::new();
    for &k in &positions {
        let (_, d) = node_at(w, k).unwrap();
        per_layer.entry(d).or_default().push(k);
    }
    for v in per_layer.values_mut() {
        v.sort_by(|a, b| b.cmp(a));
    }
    let mut modules: BTreeMap<i32, Vec<VertexId>> = BTreeMap::new();
    let mut slot_of: BTreeMap<(usize, i64), (i32, usize)> = BTreeMap::new();
    let mut nodes = Vec::new();
    let mut node_slot = Vec::new();
    let mut node_index: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    for layer in 0..layers {
        for (&d, ks) in &per_layer {
            for &k in ks {
                let (v, _) = node_at(w, k).unwrap();
                let list = modules.entry(d).or_default();
                slot_of.insert((layer, k), (d, list.len()));
                list.push(v);
            }
        }
    }
    for layer in 0..layers {
        for &k in &positions {
            let (v, d) = node_at(w, k).unwrap();
            node_index.insert((layer, k), nodes.len());
            nodes.push(DiagramNode { vertex: v, degree: d, layer, position: k });
            node_slot.push(slot_of[&(layer, k)]);
        }
    }
    let mut differential = GradedMap::new(1);
    let mut edges = Vec::new();
    let first = *positions.first().unwrap();
    let last = *positions.last().unwrap();
    let letter_positions: Vec<i64> = if w.is_trivial() {
        Vec::new()
    } else if w.kind == WordKind::Band {
        (0..n).collect()
    } else {
        (first..last).collect()
    };
    let wrap = |k: i64| if w.kind == WordKind::Band { k.rem_euclid(n) } else { k };
    for layer in 0..layers {
        for &k in &letter_positions {
            let l = w.letter_at(k).unwrap();
            let (src, tgt) = if l.is_direct() { (k, wrap(k + 1)) } else { (wrap(k + 1), k) };
            let scalar = if w.kind == WordKind::Band && k as usize == w.lambda_at { w.lambda.clone() } else { Scalar::one() };
            push_edge(&mut differential, &mut edges, &slot_of, &node_index, (layer, src), (layer, tgt), &l, scalar, EdgeKind::Letter);
            if w.kind == WordKind::Band && k as usize == w.lambda_at && layer + 1 < layers {
                push_edge(
                    &mut differential,
                    &mut edges,
                    &slot_of,
                    &node_index,
                    (layer, src),
                    (layer + 1, tgt),
                    &l,
                    Scalar::one(),
                    EdgeKind::Link,
                );
            }
        }
    }
    let c = ProjComplex {
        modules,
        differential,
        node_slot,
        diagram: UnfoldedDiagram { nodes, edges, cyclic: w.kind == WordKind::Band },
        provenance: w.literal(alg),
        truncated: w.kind.is_infinite(),
    };
    c.check_d2(alg)?;
    Ok(c)
}

#[allow(clippy::too_many_arguments)]
fn push_edge(
    differential: &mut GradedMap,
    edges: &mut Vec<DiagramEdge>,
    slot_of: &BTreeMap<(usize, i64), (i32, usize)>,
    node_index: &BTreeMap<(usize, i64), usize>,
    src: (usize, i64),
    tgt: (usize, i64),
    l: &Letter,
    scalar: Scalar,
    kind: EdgeKind,
) {
    let (d, row) = slot_of[&src];
    let (_, col) = slot_of[&tgt];
    differential.push(d, Entry { row, col, scalar: scalar.clone(), path: l.path.clone() });
    edges.push(DiagramEdge { from: node_index[&src], to: node_index[&tgt], path: l.path.clone(), scalar, kind });
}

impl UnfoldedDiagram {
    /// Graphviz rendering.
    pub fn to_dot(&self, alg: &GentleAlgebra, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  rankdir=LR;\n");
        for (k, n) in self.nodes.iter().enumerate() {
            s.push_str(&format!(
                "  n{k} [label=\"P({})\\n{}\"{}];\n",
                alg.vertex_name(n.vertex),
                n.degree,
                if self.nodes.iter().any(|m| m.layer > 0) { format!(", group=L{}", n.layer) } else { String::new() }
            ));
        }
        for e in &self.edges {
            let scalar = if e.scalar.is_one() { String::new() } else { format!("{} ", format_scalar(&e.scalar)) };
            let style = if e.kind == EdgeKind::Link { ", style=dashed" } else { "" };
            s.push_str(&format!("  n{} -> n{} [label=\"{}{}\"{}];\n", e.from, e.to, scalar, alg.path_name(&e.path), style));
        }
        s.push_str("}\n");
        s
    }

    /// Read the word back from a single-layer diagram.
    pub fn to_word(&self, alg: &GentleAlgebra) -> Option<Word> {
        let layer0: Vec<usize> = (0..self.nodes.len()).filter(|&k| self.nodes[k].layer == 0).collect();
        if layer0.len() == 1 && self.edges.is_empty() {
            let n = &self.nodes[layer0[0]];
            return Some(Word::trivial(n.vertex, n.degree, false));
        }
        let count = layer0.len();
        let steps = if self.cyclic { count } else { count - 1 };
        let mut letters = Vec::new();
        let mut lambda = Scalar::one();
        let mut lambda_at = 0;
        for t in 0..steps {
            let (a, b) = (layer0[t], layer0[(t + 1) % count]);
            let e = self.edges.iter().find(|e| e.kind == EdgeKind::Letter && ((e.from == a && e.to == b) || (e.from == b && e.to == a)))?;
            let (na, nb) = (&self.nodes[a], &self.nodes[b]);
            letters.push(Letter::new(e.path.clone(), na.degree, nb.degree));
            if !e.scalar.is_one() {
                lambda = e.scalar.clone();
                lambda_at = t;
            }
        }
        if self.cyclic {
            Word::band_at(alg, letters, lambda, lambda_at, 1).ok()
        } else {
            Word::string(alg, letters).ok()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::scalar;
    use crate::words::parse_word;
    use crate::words::tests::{running, W23, Z};

    fn names(a: &GentleAlgebra, c: &ProjComplex, d: i32) -> Vec<String> {
        c.modules[&d].iter().map(|&v| a.vertex_name(v).to_string()).collect()
    }

    #[test]
    fn string_complex_matches_worked_example() {
        let a = running();
        let c = build_complex(&a, &parse_word(&a, W23).unwrap(), None).unwrap();
        assert_eq!(names(&a, &c, 0), vec!["0"]);
        assert_eq!(names(&a, &c, 1), vec!["2", "3"]);
        assert_eq!(names(&a, &c, 2), vec!["1", "4"]);
        assert_eq!(names(&a, &c, 3), vec!["3"]);
        let entries = |d: i32| {
            let mut v: Vec<(usize, usize, String)> =
                c.differential.blocks[&d].iter().map(|e| (e.row, e.col, a.path_name(&e.path))).collect();
            v.sort();
            v
        };
        assert_eq!(entries(0), vec![(0, 0, "c".into()), (0, 1, "f".into())]);
        assert_eq!(entries(1), vec![(0, 0, "b".into()), (1, 1, "e".into())]);
        assert_eq!(entries(2), vec![(0, 0, "a*f".into())]);
    }

    #[test]
    fn band_complex_matches_worked_example() {
        let a = running();
        let z = parse_word(&a, Z).unwrap().with_band_data(scalar(5), 1);
        let c = build_complex(&a, &z, None).unwrap();
        assert_eq!(names(&a, &c, 0), vec!["0"]);
        assert_eq!(names(&a, &c, 1), vec!["2", "3"]);
        assert_eq!(names(&a, &c, 2), vec!["1", "4"]);
        assert_eq!(names(&a, &c, 3), vec!["0"]);
        let mut last: Vec<(usize, usize, String, String)> =
            c.differential.blocks[&2].iter().map(|e| (e.row, e.col, format_scalar(&e.scalar), a.path_name(&e.path))).collect();
        last.sort();
        assert_eq!(last, vec![(0, 0, "5".into(), "a".into()), (1, 0, "1".into(), "d".into())]);
    }

    #[test]
    fn higher_band_has_links_where_lambda_sits() {
        let a = running();
        let z = parse_word(&a, Z).unwrap().with_band_data(scalar(3), 2);
        let c = build_complex(&a, &z, None).unwrap();
        assert_eq!(c.size(2), 4);
        let links: Vec<_> = c.diagram.edges.iter().filter(|e| e.kind == EdgeKind::Link).collect();
        assert_eq!(links.len(), 1);
        assert_eq!(a.path_name(&links[0].path), "a");
        let block = &c.differential.blocks[&2];
        assert!(block.iter().any(|e| e.row == 0 && e.col == 1 && e.scalar.is_one() && a.path_name(&e.path) == "a"));
        // Dropping the links leaves two copies of the one-dimensional band.
        let letters = c.diagram.edges.iter().filter(|e| e.kind == EdgeKind::Letter).count();
        assert_eq!(letters, 12);
    }

    #[test]
    fn unfold_round_trip() {
        let a = running();
        for lit in [W23, Z, "(1_2,0,0)"] {
            let w = parse_word(&a, lit).unwrap();
            let c = build_complex(&a, &w, None).unwrap();
            let back = c.diagram.to_word(&a).unwrap();
            assert_eq!(back.canonical_key(&a), w.canonical_key(&a));
        }
        let t = build_complex(&a, &parse_word(&a, "(1_2,0,0)").unwrap(), None).unwrap();
        assert_eq!(t.diagram.nodes.len(), 1);
        assert!(t.diagram.to_dot(&a, "t").contains("P(2)"));
    }

    #[test]
    fn nonzero_square_detected() {
        let a = running();
        let v = |n: &str| a.vertex_id(n).unwrap();
        let mut d = GradedMap::new(1);
        d.push(0, Entry { row: 0, col: 0, scalar: Scalar::one(), path: a.parse_path("a").unwrap() });
        d.push(1, Entry { row: 0, col: 0, scalar: Scalar::one(), path: a.parse_path("f").unwrap() });
        let c = ProjComplex {
            modules: [(0, vec![v("1")]), (1, vec![v("0")]), (2, vec![v("3")])].into_iter().collect(),
            differential: d,
            node_slot: Vec::new(),
            diagram: UnfoldedDiagram { nodes: Vec::new(), edges: Vec::new(), cyclic: false },
            provenance: String::new(),
            truncated: false,
        };
        assert_eq!(c.check_d2(&a), Err(ComplexError::D2NotZero(0)));
    }

    #[test]
    fn infinite_word_needs_cutoff() {
        let a = running();
        let w = crate::words::resolve_infinite(&a, &parse_word(&a, "(a,0,1)").unwrap()).unwrap();
        assert_eq!(build_complex(&a, &w, None), Err(ComplexError::CutoffRequired));
        let c = build_complex(&a, &w, Some(-4)).unwrap();
        assert_eq!(c.min_degree(), Some(-4));
        assert_eq!(c.max_degree(), Some(1));
    }
}
