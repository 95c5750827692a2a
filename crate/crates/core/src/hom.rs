//! Canonical bases of morphism spaces between string complexes and
//! one-dimensional band complexes, read off from overlaps of unfolded
//! diagrams.
//!
//! Chain maps decompose into single, double and graph maps. A homotopy can
//! only change a component by completing a differential, so the homotopy
//! relation is generated by elementary homotopies with one component. The
//! surviving classes of single and double maps are either singletons or
//! chains shaped like a quasi-graph overlap with the shifted target.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complex::{build_complex, node_at, ComplexError, Entry, GradedMap, ProjComplex};
use crate::field::{format_scalar, rank, RationalField, Scalar};
use crate::quiver::{GentleAlgebra, Path, VertexId};
use crate::words::{Word, WordKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("band of dimension {0}: use the higher band formulas")]
    HigherBand(usize),
    #[error("the chain-level basis is only defined for finite words")]
    InfiniteWord,
    #[error("no basis element with index {0}")]
    NoSuchElement(usize),
    #[error("internal decomposition failure: {0}")]
    Decomposition(String),
}

/// A node of a flattened diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DNode {
    pub vertex: VertexId,
    pub degree: i32,
    pub position: i64,
    /// Summand index inside its degree of the built complex.
    pub slot: usize,
    /// Set on a node where an infinite tail was cut off.
    pub open: bool,
}

/// A differential component between neighbouring nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DEdge {
    pub low: usize,
    pub high: usize,
    pub path: Path,
    pub scalar: Scalar,
}

/// One word together with its complex and flattened diagram. Edge `k` joins
/// node `k` and node `k + 1` (cyclically for bands).
#[derive(Debug, Clone)]
pub struct Side {
    pub word: Word,
    pub complex: ProjComplex,
    pub nodes: Vec<DNode>,
    pub edges: Vec<DEdge>,
    pub cyclic: bool,
    incident: Vec<Vec<usize>>,
}

impl Side {
    /// Build the side of a word, cutting infinite tails below `cutoff`.
    pub fn new(alg: &GentleAlgebra, w: &Word, cutoff: Option<i32>, mark_open: bool) -> Result<Side, HomError> {
        if w.kind == WordKind::Band && w.dim != 1 {
            return Err(HomError::HigherBand(w.dim));
        }
        let complex = build_complex(alg, w, cutoff)?;
        let mut positions: Vec<i64> = complex.diagram.nodes.iter().filter(|n| n.layer == 0).map(|n| n.position).collect();
        positions.sort_unstable();
        let mut nodes: Vec<DNode> = positions
            .iter()
            .map(|&k| {
                let (vertex, degree) = node_at(w, k).expect("node inside the word");
                let slot = complex.slot_of_position(k).expect("node has a slot").1;
                DNode { vertex, degree, position: k, slot, open: false }
            })
            .collect();
        if mark_open {
            if !w.left_period.is_empty() {
                nodes[0].open = true;
            }
            if !w.right_period.is_empty() {
                nodes.last_mut().unwrap().open = true;
            }
        }
        let cyclic = w.kind == WordKind::Band;
        let count = nodes.len();
        let steps = if cyclic { count } else { count.saturating_sub(1) };
        let mut edges = Vec::with_capacity(steps);
        for (t, &k) in positions.iter().enumerate().take(steps) {
            let l = w.letter_at(k).expect("letter inside the word");
            let (a, b) = (t, (t + 1) % count);
            let (low, high) = if l.is_direct() { (a, b) } else { (b, a) };
            let scalar = if cyclic && k as usize == w.lambda_at { w.lambda.clone() } else { Scalar::one() };
            edges.push(DEdge { low, high, path: l.path.clone(), scalar });
        }
        let mut incident = vec![Vec::new(); count];
        for (e, d) in edges.iter().enumerate() {
            incident[d.low].push(e);
            incident[d.high].push(e);
        }
        Ok(Side { word: w.clone(), complex, nodes, edges, cyclic, incident })
    }

    /// Edge and node reached from node `k` walking `dir` (+1 right, -1 left).
    fn step(&self, k: usize, dir: i8) -> Option<(usize, usize)> {
        let n = self.nodes.len();
        if self.edges.is_empty() {
            return None;
        }
        if dir > 0 {
            if self.cyclic || k + 1 < n {
                Some((k, (k + 1) % n))
            } else {
                None
            }
        } else if self.cyclic || k > 0 {
            let j = (k + n - 1) % n;
            Some((j, j))
        } else {
            None
        }
    }

    fn in_edges(&self, k: usize) -> impl Iterator<Item = &DEdge> + '_ {
        self.incident[k].iter().map(|&e| &self.edges[e]).filter(move |e| e.high == k)
    }

    fn out_edges(&self, k: usize) -> impl Iterator<Item = &DEdge> + '_ {
        self.incident[k].iter().map(|&e| &self.edges[e]).filter(move |e| e.low == k)
    }

    fn in_edge_ids(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[k].iter().copied().filter(move |&e| self.edges[e].high == k)
    }

    fn out_edge_ids(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[k].iter().copied().filter(move |&e| self.edges[e].low == k)
    }
}

/// The two sides of a morphism problem plus the degree below which results
/// are discarded when both words are infinite.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub v: Side,
    pub w: Side,
    pub zone: Option<i32>,
}

fn tail_lcm(words: &[&Word]) -> i64 {
    let gcd = |mut a: i64, mut b: i64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut l = 1i64;
    for w in words {
        for p in [&w.left_period, &w.right_period] {
            if !p.is_empty() {
                let m = p.len() as i64;
                l = l / gcd(l, m) * m;
            }
        }
    }
    l
}

fn core_min(w: &Word) -> i32 {
    (0..=w.letters.len() as i64).filter_map(|k| node_at(w, k).map(|(_, d)| d)).min().unwrap_or(0)
}

/// Build both sides. A single infinite word is cut one degree below the
/// other complex, which leaves all maps and homotopies unchanged. Two
/// infinite words are cut deep inside their periodic tails and everything
/// touching the cut region is discarded.
pub fn prepare(alg: &GentleAlgebra, v: &Word, w: &Word) -> Result<Prepared, HomError> {
    match (v.is_finite(), w.is_finite()) {
        (true, true) => Ok(Prepared { v: Side::new(alg, v, None, false)?, w: Side::new(alg, w, None, false)?, zone: None }),
        (true, false) => {
            let sv = Side::new(alg, v, None, false)?;
            let cut = sv.complex.min_degree().unwrap_or(0) - 1;
            Ok(Prepared { w: Side::new(alg, w, Some(cut), false)?, v: sv, zone: None })
        }
        (false, true) => {
            let sw = Side::new(alg, w, None, false)?;
            let cut = sw.complex.min_degree().unwrap_or(0) - 1;
            Ok(Prepared { v: Side::new(alg, v, Some(cut), false)?, w: sw, zone: None })
        }
        (false, false) => {
            let l = tail_lcm(&[v, w]) as i32;
            let core = core_min(v).min(core_min(w));
            let cut = core - 4 * l - 4;
            let zone = core - 2 * l - 2;
            Ok(Prepared { v: Side::new(alg, v, Some(cut), true)?, w: Side::new(alg, w, Some(cut), true)?, zone: Some(zone) })
        }
    }
}

/// Kinds of basis morphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Variant {
    Graph,
    QuasiRep,
    SingletonSingle,
    SingletonDouble,
    Single,
    Double,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Graph => "graph",
            Variant::QuasiRep => "quasiRep",
            Variant::SingletonSingle => "singletonSingle",
            Variant::SingletonDouble => "singletonDouble",
            Variant::Single => "single",
            Variant::Double => "double",
        }
    }
}

/// One component `scalar * path` from source node `src` to target node `tgt`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub src: usize,
    pub tgt: usize,
    pub degree: i32,
    pub scalar: Scalar,
    pub path: Path,
}

/// A basis morphism with its components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisMorphism {
    pub variant: Variant,
    pub components: Vec<Component>,
    pub provenance: String,
    /// For a quasi-graph representative: the whole homotopy family, each
    /// entry homotopic to the representative.
    pub representatives: Vec<(Scalar, BasisMorphism)>,
}

impl BasisMorphism {
    fn new(variant: Variant, components: Vec<Component>, provenance: String) -> Self {
        BasisMorphism { variant, components, provenance, representatives: Vec::new() }
    }

    /// Components as `(degree, path name, scalar)` sorted, for comparisons.
    pub fn signature(&self, alg: &GentleAlgebra) -> Vec<(i32, usize, usize, String, String)> {
        let mut v: Vec<_> =
            self.components.iter().map(|c| (c.degree, c.src, c.tgt, alg.path_name(&c.path), format_scalar(&c.scalar))).collect();
        v.sort();
        v
    }

    pub fn scaled(&self, s: &Scalar) -> BasisMorphism {
        let mut m = self.clone();
        for c in m.components.iter_mut() {
            c.scalar = &c.scalar * s;
        }
        m
    }

    pub fn to_json(&self, alg: &GentleAlgebra, v: &Side, w: &Side) -> serde_json::Value {
        let comps: Vec<_> = self
            .components
            .iter()
            .map(|c| {
                serde_json::json!({
                    "degree": c.degree,
                    "srcSlot": v.nodes[c.src].slot,
                    "tgtSlot": w.nodes[c.tgt].slot,
                    "scalar": format_scalar(&c.scalar),
                    "path": alg.path_name(&c.path),
                })
            })
            .collect();
        let mut obj = serde_json::json!({
            "variant": self.variant.name(),
            "components": comps,
            "provenance": self.provenance,
        });
        if !self.representatives.is_empty() {
            obj["representatives"] = self
                .representatives
                .iter()
                .map(|(s, m)| {
                    serde_json::json!({
                        "scalar": format_scalar(s),
                        "map": m.to_json(alg, v, w),
                    })
                })
                .collect();
        }
        obj
    }
}

/// Type of the edge just outside an overlap end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flank {
    /// The diagram ends here.
    None,
    /// The edge points into the end node.
    In,
    /// The edge points out of the end node.
    Out,
    /// An infinite tail continues past the window.
    Open,
}

/// Which endpoint condition holds at one end of an overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndCondition {
    /// Same orientation and the outer square commutes through `path`
    /// between the outer nodes.
    Factor { src: usize, tgt: usize, path: Path },
    /// Opposite orientations with the source edge leaving and the target
    /// edge entering.
    Opposite,
    /// The overlap runs into an infinite tail.
    Open,
    /// No endpoint condition holds.
    Fails,
}

impl EndCondition {
    pub fn holds(&self) -> bool {
        !matches!(self, EndCondition::Fails)
    }
}

/// A maximal overlap of the two diagrams. Target nodes sit `delta` degrees
/// below their partners: 0 for graph maps, 1 for quasi-graph maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub delta: i32,
    /// +1 if the target is read in the same direction as the source.
    pub sigma: i8,
    /// Matched node pairs from left to right along the source.
    pub pairs: Vec<(usize, usize)>,
    /// The overlap wraps all the way around two bands.
    pub wrap: bool,
    pub left_flanks: (Flank, Flank),
    pub right_flanks: (Flank, Flank),
    pub left: EndCondition,
    pub right: EndCondition,
}

impl Overlap {
    pub fn is_graph(&self) -> bool {
        self.wrap || (self.left.holds() && self.right.holds())
    }
    pub fn is_quasi(&self) -> bool {
        self.wrap || (self.left == EndCondition::Fails && self.right == EndCondition::Fails)
    }
    fn describe(&self) -> String {
        let (a0, b0) = self.pairs[0];
        let (a1, b1) = *self.pairs.last().unwrap();
        format!(
            "{} overlap v[{a0}..{a1}] w[{b0}..{b1}]{}",
            if self.delta == 0 { "graph" } else { "quasi" },
            if self.wrap { " wrapping" } else { "" }
        )
    }
}

/// Status of a homotopy family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FamilyStatus {
    /// Not null-homotopic: the family is a singleton or a quasi-graph chain.
    Survives,
    /// Killed by an elementary homotopy through a nonstationary path.
    NullN1,
    /// Killed by the identity on a source differential.
    NullN2,
    /// Killed by the identity on a target differential.
    NullN3,
    /// Killed by an inconsistent scalar cycle around a band.
    NullCycle,
}

/// The family of basis maps homotopic to a given single or double map up
/// to scalars, with the homotopies linking them.
#[derive(Debug, Clone)]
pub struct HomotopySet {
    /// `(c, b)` with `c * b` homotopic to the starting map.
    pub members: Vec<(Scalar, usize)>,
    /// Elementary homotopies (degree -1 components) used along the walk.
    pub links: Vec<Component>,
    pub status: FamilyStatus,
}

/// Everything computed for one pair of words.
#[derive(Debug, Clone)]
pub struct HomAnalysis {
    /// Graph, single and double maps, in that order.
    pub chain_basis: Vec<BasisMorphism>,
    /// Canonical basis of the homotopy category.
    pub theta: Vec<BasisMorphism>,
    /// Quasi-graph overlaps without an infinite end.
    pub quasi_overlaps: Vec<Overlap>,
    /// Class id of every chain-basis element (graph maps have their own).
    pub class_of: Vec<usize>,
    relations: Vec<Relation>,
    discarded: BTreeSet<usize>,
}

#[derive(Debug, Clone)]
struct Relation {
    h: Component,
    terms: Vec<(usize, Scalar)>,
    /// Which kind of completion produced each term: true for the source side.
    from_source: Vec<bool>,
}

/// A pair of sides with the combinatorial machinery.
pub struct HomProblem<'a> {
    pub alg: &'a GentleAlgebra,
    pub v: &'a Side,
    pub w: &'a Side,
    pub zone: Option<i32>,
}

impl<'a> HomProblem<'a> {
    pub fn new(alg: &'a GentleAlgebra, p: &'a Prepared) -> Self {
        HomProblem { alg, v: &p.v, w: &p.w, zone: p.zone }
    }

    pub fn from_sides(alg: &'a GentleAlgebra, v: &'a Side, w: &'a Side) -> Self {
        HomProblem { alg, v, w, zone: None }
    }

    fn edges_match(&self, ev: usize, a: usize, ew: usize, b: usize) -> bool {
        let (e, f) = (&self.v.edges[ev], &self.w.edges[ew]);
        e.path == f.path && ((e.low == a) == (f.low == b))
    }

    fn flank(side: &Side, node: usize, step: Option<(usize, usize)>) -> (Flank, Option<usize>) {
        match step {
            None if side.nodes[node].open => (Flank::Open, None),
            None => (Flank::None, None),
            Some((e, _)) if side.edges[e].high == node => (Flank::In, Some(e)),
            Some((e, _)) => (Flank::Out, Some(e)),
        }
    }

    fn end_condition(&self, a: usize, b: usize, fv: (Flank, Option<usize>), fw: (Flank, Option<usize>)) -> EndCondition {
        match (fv.0, fw.0) {
            (Flank::Open, _) | (_, Flank::Open) => EndCondition::Open,
            (Flank::None | Flank::Out, Flank::None | Flank::In) => EndCondition::Opposite,
            (Flank::In, Flank::In) => {
                let (ev, ew) = (&self.v.edges[fv.1.unwrap()], &self.w.edges[fw.1.unwrap()]);
                // ev = f then ew: the source edge begins with the target edge.
                let (x, y) = (ev.low, ew.low);
                if ev.path.len() > ew.path.len() && ev.path.arrows.starts_with(&ew.path.arrows) {
                    let path = self.alg.path_from_arrows(ev.path.arrows[ew.path.len()..].to_vec()).unwrap();
                    debug_assert_eq!(path.source, self.w.nodes[y].vertex);
                    EndCondition::Factor { src: x, tgt: y, path }
                } else {
                    let _ = (a, b);
                    EndCondition::Fails
                }
            }
            (Flank::Out, Flank::Out) => {
                let (ev, ew) = (&self.v.edges[fv.1.unwrap()], &self.w.edges[fw.1.unwrap()]);
                // ew = ev then f: the target edge ends with the source edge.
                let (x, y) = (ev.high, ew.high);
                let (lw, lv) = (ew.path.len(), ev.path.len());
                if lw > lv && ew.path.arrows.ends_with(&ev.path.arrows) {
                    let path = self.alg.path_from_arrows(ew.path.arrows[..lw - lv].to_vec()).unwrap();
                    EndCondition::Factor { src: x, tgt: y, path }
                } else {
                    EndCondition::Fails
                }
            }
            _ => EndCondition::Fails,
        }
    }

    /// All maximal overlaps with the given degree offset.
    pub fn overlaps(&self, delta: i32) -> Vec<Overlap> {
        let (v, w) = (self.v, self.w);
        let mut seen: BTreeSet<(Vec<(usize, usize)>, i8)> = BTreeSet::new();
        let mut out = Vec::new();
        let cap = 2 * (v.nodes.len() + w.nodes.len()) + 4;
        for a in 0..v.nodes.len() {
            for b in 0..w.nodes.len() {
                let (na, nb) = (&v.nodes[a], &w.nodes[b]);
                if na.vertex != nb.vertex || nb.degree != na.degree - delta {
                    continue;
                }
                for sigma in [1i8, -1] {
                    let walk = |dir: i8| {
                        let mut cur = (a, b);
                        let mut pairs = Vec::new();
                        let mut wrapped = false;
                        while let (Some((ev, na2)), Some((ew, nb2))) = (v.step(cur.0, dir), w.step(cur.1, dir * sigma)) {
                            if !self.edges_match(ev, cur.0, ew, cur.1) {
                                break;
                            }
                            cur = (na2, nb2);
                            if cur == (a, b) {
                                wrapped = true;
                                break;
                            }
                            pairs.push(cur);
                            if pairs.len() > cap {
                                break;
                            }
                        }
                        (pairs, wrapped)
                    };
                    let (right, wrapped) = walk(1);
                    let pairs: Vec<(usize, usize)> = if wrapped {
                        let mut p = vec![(a, b)];
                        p.extend(right);
                        p
                    } else {
                        let (left, _) = walk(-1);
                        let mut p: Vec<(usize, usize)> = left.into_iter().rev().collect();
                        p.push((a, b));
                        p.extend(right);
                        p
                    };
                    let mut key: Vec<(usize, usize)> = pairs.clone();
                    key.sort_unstable();
                    let key_sigma = if pairs.len() == 1 { sigma } else { 0 };
                    if !seen.insert((key, key_sigma)) {
                        continue;
                    }
                    if wrapped {
                        // Start a wrapping overlap at its smallest pair.
                        let start = pairs.iter().enumerate().min_by_key(|(_, p)| **p).unwrap().0;
                        let mut p = pairs[start..].to_vec();
                        p.extend_from_slice(&pairs[..start]);
                        out.push(Overlap {
                            delta,
                            sigma,
                            pairs: p,
                            wrap: true,
                            left_flanks: (Flank::None, Flank::None),
                            right_flanks: (Flank::None, Flank::None),
                            left: EndCondition::Opposite,
                            right: EndCondition::Opposite,
                        });
                        continue;
                    }
                    let (la, lb) = pairs[0];
                    let (ra, rb) = *pairs.last().unwrap();
                    let lv = Self::flank(v, la, v.step(la, -1));
                    let lw = Self::flank(w, lb, w.step(lb, -sigma));
                    let rv = Self::flank(v, ra, v.step(ra, 1));
                    let rw = Self::flank(w, rb, w.step(rb, sigma));
                    out.push(Overlap {
                        delta,
                        sigma,
                        left: self.end_condition(la, lb, lv, lw),
                        right: self.end_condition(ra, rb, rv, rw),
                        left_flanks: (lv.0, lw.0),
                        right_flanks: (rv.0, rw.0),
                        pairs,
                        wrap: false,
                    });
                }
            }
        }
        out
    }

    /// Scalars of the isomorphism components along an overlap, starting at 1.
    /// `None` if a wrapping overlap is scalar-inconsistent.
    fn iso_scalars(&self, o: &Overlap) -> Option<Vec<Scalar>> {
        let mut cs = vec![Scalar::one()];
        let steps = if o.wrap { o.pairs.len() } else { o.pairs.len() - 1 };
        for k in 0..steps {
            let (a, b) = o.pairs[k];
            let (ev, _) = self.v.step(a, 1).unwrap();
            let (ew, _) = self.w.step(b, o.sigma).unwrap();
            let (sv, sw) = (&self.v.edges[ev].scalar, &self.w.edges[ew].scalar);
            let c = &cs[k];
            let next = if self.v.edges[ev].low == a { c * sw / sv } else { c * sv / sw };
            cs.push(next);
        }
        if o.wrap {
            let last = cs.pop().unwrap();
            if last != cs[0] {
                return None;
            }
        }
        Some(cs)
    }

    fn factor_component(&self, end: (usize, usize), iso: &Scalar, cond: &EndCondition, flank_in: bool) -> Option<Component> {
        let EndCondition::Factor { src, tgt, path } = cond else { return None };
        let (a, _) = end;
        let ev = self.v.incident[a].iter().copied().find(|&e| {
            let d = &self.v.edges[e];
            (d.low == *src && d.high == a) || (d.high == *src && d.low == a)
        })?;
        let wt = *tgt;
        let ew = self.w.incident[end.1].iter().copied().find(|&e| {
            let d = &self.w.edges[e];
            (d.low == wt && d.high == end.1) || (d.high == wt && d.low == end.1)
        })?;
        let (sv, sw) = (&self.v.edges[ev].scalar, &self.w.edges[ew].scalar);
        let scalar = if flank_in { iso * sv / sw } else { iso * sw / sv };
        Some(Component { src: *src, tgt: *tgt, degree: self.v.nodes[*src].degree, scalar, path: path.clone() })
    }

    /// Graph maps, one per overlap satisfying the endpoint conditions.
    pub fn graph_maps(&self) -> Vec<BasisMorphism> {
        let mut out: Vec<BasisMorphism> = Vec::new();
        let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
        for o in self.overlaps(0) {
            if !o.is_graph() {
                continue;
            }
            let Some(cs) = self.iso_scalars(&o) else { continue };
            let mut key = o.pairs.clone();
            key.sort_unstable();
            if seen.contains(&key) {
                continue;
            }
            let mut comps: Vec<Component> = o
                .pairs
                .iter()
                .zip(cs.iter())
                .map(|(&(a, b), c)| Component {
                    src: a,
                    tgt: b,
                    degree: self.v.nodes[a].degree,
                    scalar: c.clone(),
                    path: Path::stationary(self.v.nodes[a].vertex),
                })
                .collect();
            if !o.wrap {
                let left_in = o.left_flanks.0 == Flank::In;
                let right_in = o.right_flanks.0 == Flank::In;
                if let Some(c) = self.factor_component(o.pairs[0], &cs[0], &o.left, left_in) {
                    comps.push(c);
                }
                let last = o.pairs.len() - 1;
                if let Some(c) = self.factor_component(o.pairs[last], &cs[last], &o.right, right_in) {
                    comps.push(c);
                }
            }
            if let Some(z) = self.zone {
                if comps.iter().all(|c| c.degree < z) {
                    continue;
                }
            }
            seen.insert(key);
            out.push(BasisMorphism::new(Variant::Graph, comps, o.describe()));
        }
        out
    }

    /// Single maps: one nonstationary component killed by every adjacent
    /// differential it can be composed with.
    pub fn single_maps(&self) -> Vec<BasisMorphism> {
        let (v, w, alg) = (self.v, self.w, self.alg);
        let mut out = Vec::new();
        for a in 0..v.nodes.len() {
            for b in 0..w.nodes.len() {
                if v.nodes[a].degree != w.nodes[b].degree {
                    continue;
                }
                for p in alg.paths(w.nodes[b].vertex, v.nodes[a].vertex) {
                    if p.is_stationary() {
                        continue;
                    }
                    if v.in_edges(a).any(|e| alg.concat(&e.path, p).is_some()) {
                        continue;
                    }
                    if w.out_edges(b).any(|e| alg.concat(p, &e.path).is_some()) {
                        continue;
                    }
                    let c = Component { src: a, tgt: b, degree: v.nodes[a].degree, scalar: Scalar::one(), path: p.clone() };
                    out.push(BasisMorphism::new(Variant::Single, vec![c], format!("single v{a} w{b}")));
                }
            }
        }
        out
    }

    /// Double maps: two components around a commuting square with a nonzero
    /// composite.
    pub fn double_maps(&self) -> Vec<BasisMorphism> {
        let (v, w, alg) = (self.v, self.w, self.alg);
        let mut out = Vec::new();
        for (ie, ev) in v.edges.iter().enumerate() {
            for (je, ew) in w.edges.iter().enumerate() {
                let (x1, x2, y1, y2) = (ev.low, ev.high, ew.low, ew.high);
                if v.nodes[x1].degree != w.nodes[y1].degree {
                    continue;
                }
                for fl in alg.paths(w.nodes[y1].vertex, v.nodes[x1].vertex) {
                    if fl.is_stationary() {
                        continue;
                    }
                    let Some(c) = alg.concat(fl, &ew.path) else { continue };
                    let (lc, lv) = (c.len(), ev.path.len());
                    if lc <= lv || !c.arrows.ends_with(&ev.path.arrows) {
                        continue;
                    }
                    let Some(fr) = alg.path_from_arrows(c.arrows[..lc - lv].to_vec()) else { continue };
                    if fr.source != w.nodes[y2].vertex || fr.target != v.nodes[x2].vertex {
                        continue;
                    }
                    if v.in_edges(x1).any(|e| alg.concat(&e.path, fl).is_some()) {
                        continue;
                    }
                    if w.out_edge_ids(y1).filter(|&e| e != je).any(|e| alg.concat(fl, &w.edges[e].path).is_some()) {
                        continue;
                    }
                    if v.in_edge_ids(x2).filter(|&e| e != ie).any(|e| alg.concat(&v.edges[e].path, &fr).is_some()) {
                        continue;
                    }
                    if w.out_edges(y2).any(|e| alg.concat(&fr, &e.path).is_some()) {
                        continue;
                    }
                    let sr = &ew.scalar / &ev.scalar;
                    let comps = vec![
                        Component { src: x1, tgt: y1, degree: v.nodes[x1].degree, scalar: Scalar::one(), path: fl.clone() },
                        Component { src: x2, tgt: y2, degree: v.nodes[x2].degree, scalar: sr, path: fr },
                    ];
                    out.push(BasisMorphism::new(Variant::Double, comps, format!("double v{x1}-{x2} w{y1}-{y2}")));
                }
            }
        }
        out
    }

    /// Graph, single and double maps: a basis of chain maps.
    pub fn chain_basis(&self) -> Vec<BasisMorphism> {
        let mut b = self.graph_maps();
        b.extend(self.single_maps());
        b.extend(self.double_maps());
        b
    }

    /// Boundary `d h + h d` of the elementary homotopy `h` as components.
    pub fn elementary_boundary(&self, h: &Component) -> Vec<(Component, bool)> {
        let (v, w, alg) = (self.v, self.w, self.alg);
        let mut out = Vec::new();
        for e in v.in_edges(h.src) {
            if let Some(p) = alg.concat(&e.path, &h.path) {
                let c = Component { src: e.low, tgt: h.tgt, degree: v.nodes[e.low].degree, scalar: &e.scalar * &h.scalar, path: p };
                out.push((c, true));
            }
        }
        for e in w.out_edges(h.tgt) {
            if let Some(p) = alg.concat(&h.path, &e.path) {
                let c = Component { src: h.src, tgt: e.high, degree: v.nodes[h.src].degree, scalar: &h.scalar * &e.scalar, path: p };
                out.push((c, false));
            }
        }
        out
    }

    fn elementary_homotopies(&self) -> Vec<Component> {
        let (v, w, alg) = (self.v, self.w, self.alg);
        let mut out = Vec::new();
        for a in 0..v.nodes.len() {
            for b in 0..w.nodes.len() {
                if v.nodes[a].degree != w.nodes[b].degree + 1 {
                    continue;
                }
                for q in alg.paths(w.nodes[b].vertex, v.nodes[a].vertex) {
                    out.push(Component { src: a, tgt: b, degree: v.nodes[a].degree, scalar: Scalar::one(), path: q.clone() });
                }
            }
        }
        out
    }

    /// Full analysis: chain basis, homotopy classes and the canonical basis.
    pub fn analyze(&self) -> Result<HomAnalysis, HomError> {
        let chain_basis = self.chain_basis();
        let n = chain_basis.len();
        let mut index: HashMap<(usize, usize, &Path), (usize, &Scalar)> = HashMap::new();
        for (i, b) in chain_basis.iter().enumerate() {
            for c in &b.components {
                index.insert((c.src, c.tgt, &c.path), (i, &c.scalar));
            }
        }
        let mut relations = Vec::new();
        for h in self.elementary_homotopies() {
            let bd = self.elementary_boundary(&h);
            if bd.is_empty() {
                continue;
            }
            let mut terms: BTreeMap<usize, (Scalar, bool)> = BTreeMap::new();
            for (c, from_source) in &bd {
                let Some(&(i, s)) = index.get(&(c.src, c.tgt, &c.path)) else {
                    return Err(HomError::Decomposition(format!("boundary component v{} w{} outside the chain basis", c.src, c.tgt)));
                };
                if chain_basis[i].variant == Variant::Graph {
                    return Err(HomError::Decomposition("boundary meets a graph map".into()));
                }
                let coeff = &c.scalar / s;
                match terms.get(&i) {
                    Some((k, _)) if *k != coeff => return Err(HomError::Decomposition("inconsistent double map coefficients".into())),
                    Some(_) => {}
                    None => {
                        terms.insert(i, (coeff, *from_source));
                    }
                }
            }
            for &i in terms.keys() {
                let need = chain_basis[i].components.len();
                let got = bd.iter().filter(|(c, _)| index[&(c.src, c.tgt, &c.path)].0 == i).count();
                if got != need {
                    return Err(HomError::Decomposition("partial double map in a boundary".into()));
                }
            }
            let from_source = terms.values().map(|(_, f)| *f).collect();
            let terms = terms.into_iter().map(|(i, (k, _))| (i, k)).collect();
            relations.push(Relation { h, terms, from_source });
        }
        // Union-find over elements sharing a relation.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for r in &relations {
            let first = r.terms[0].0;
            for &(i, _) in &r.terms[1..] {
                let (x, y) = (find(&mut parent, first), find(&mut parent, i));
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
        let class_of: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in class_of.iter().enumerate() {
            members.entry(c).or_default().push(i);
        }
        let mut class_rel: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, r) in relations.iter().enumerate() {
            class_rel.entry(class_of[r.terms[0].0]).or_default().push(k);
        }
        let mut discarded = BTreeSet::new();
        if let Some(z) = self.zone {
            for (&root, ms) in &members {
                let bad = ms.iter().any(|&i| {
                    chain_basis[i].variant != Variant::Graph
                        && chain_basis[i].components.iter().any(|c| c.degree < z || self.v.nodes[c.src].open || self.w.nodes[c.tgt].open)
                });
                if bad {
                    discarded.insert(root);
                }
            }
        }
        let quasi_overlaps: Vec<Overlap> = self.overlaps(1).into_iter().filter(|o| o.is_quasi()).collect();
        let mut analysis = HomAnalysis { chain_basis, theta: Vec::new(), quasi_overlaps, class_of, relations, discarded };
        let mut theta = Vec::new();
        for (&root, ms) in &members {
            let first = &analysis.chain_basis[ms[0]];
            if first.variant == Variant::Graph {
                theta.push(first.clone());
                continue;
            }
            if analysis.discarded.contains(&root) {
                continue;
            }
            let rels = class_rel.get(&root).map(Vec::as_slice).unwrap_or(&[]);
            let reps = representatives(&analysis, ms, rels);
            if reps.is_empty() {
                continue;
            }
            if ms.len() == 1 {
                let mut b = first.clone();
                b.variant = if b.variant == Variant::Single { Variant::SingletonSingle } else { Variant::SingletonDouble };
                theta.push(b);
                continue;
            }
            let preferred = self.preferred_representative(&analysis, ms);
            let mut chosen: Vec<usize> = Vec::new();
            if let Some((p, _)) = &preferred {
                chosen.push(*p);
            }
            for r in reps {
                if chosen.len() >= count_deficiency(&analysis, ms, rels) {
                    break;
                }
                if !chosen.contains(&r) {
                    chosen.push(r);
                }
            }
            for c in chosen {
                let mut b = analysis.chain_basis[c].clone();
                b.variant = Variant::QuasiRep;
                if let Some((p, desc)) = &preferred {
                    if *p == c {
                        b.provenance = desc.clone();
                    }
                }
                let set = analysis.walk(c);
                b.representatives = set.members.iter().map(|(s, i)| (s.clone(), analysis.chain_basis[*i].clone())).collect();
                theta.push(b);
            }
        }
        analysis.theta = theta;
        Ok(analysis)
    }

    /// The representative named by a quasi-graph overlap of this class: the
    /// single map on the rightmost overlap letter, or for an overlap of
    /// length zero the rightmost map in the class.
    fn preferred_representative(&self, an: &HomAnalysis, ms: &[usize]) -> Option<(usize, String)> {
        for o in &an.quasi_overlaps {
            let m = o.pairs.len();
            if m >= 2 || o.wrap {
                let (k0, k1) = if o.wrap { (m - 1, 0) } else { (m - 2, m - 1) };
                let (a0, b0) = o.pairs[k0];
                let (a1, b1) = o.pairs[k1];
                let (ev, _) = self.v.step(a0, 1)?;
                let e = &self.v.edges[ev];
                let (src, tgt) = if e.low == a0 { (a0, b1) } else { (a1, b0) };
                if let Some(&i) = ms.iter().find(|&&i| {
                    let b = &an.chain_basis[i];
                    b.components.len() == 1 && b.components[0].src == src && b.components[0].tgt == tgt && b.components[0].path == e.path
                }) {
                    return Some((i, o.describe()));
                }
            } else {
                let (a, b) = o.pairs[0];
                let touches = |i: usize| an.chain_basis[i].components.iter().any(|c| c.src == a || c.tgt == b);
                if ms.iter().any(|&i| touches(i)) {
                    let best = ms
                        .iter()
                        .copied()
                        .filter(|&i| touches(i))
                        .max_by_key(|&i| an.chain_basis[i].components.iter().map(|c| c.src).max().unwrap_or(0))
                        .unwrap();
                    return Some((best, o.describe()));
                }
            }
        }
        None
    }
}

fn class_matrix(an: &HomAnalysis, ms: &[usize], rels: &[usize]) -> Vec<Vec<Scalar>> {
    let pos: HashMap<usize, usize> = ms.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    rels.iter()
        .map(|&r| {
            let mut row = vec![Scalar::zero(); ms.len()];
            for (i, c) in &an.relations[r].terms {
                row[pos[i]] = c.clone();
            }
            row
        })
        .collect()
}

fn count_deficiency(an: &HomAnalysis, ms: &[usize], rels: &[usize]) -> usize {
    let rows = class_matrix(an, ms, rels);
    ms.len() - if rows.is_empty() { 0 } else { rank(&RationalField, rows) }
}

/// Elements completing the relation span of a class to the full class
/// space, chosen greedily in class order.
fn representatives(an: &HomAnalysis, ms: &[usize], rels: &[usize]) -> Vec<usize> {
    let mut rows = class_matrix(an, ms, rels);
    let mut r = if rows.is_empty() { 0 } else { rank(&RationalField, rows.clone()) };
    let mut out = Vec::new();
    for (k, &i) in ms.iter().enumerate() {
        if r == ms.len() {
            break;
        }
        let mut e = vec![Scalar::zero(); ms.len()];
        e[k] = Scalar::one();
        rows.push(e);
        let r2 = rank(&RationalField, rows.clone());
        if r2 > r {
            out.push(i);
            r = r2;
        } else {
            rows.pop();
        }
    }
    out
}

impl HomAnalysis {
    /// Number of elements in the canonical basis.
    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// Walk the homotopy family of a single or double map along two-term
    /// relations, recording scalars and the homotopies used.
    pub fn walk(&self, start: usize) -> HomotopySet {
        let mut coeff: BTreeMap<usize, Scalar> = BTreeMap::new();
        coeff.insert(start, Scalar::one());
        let mut order = vec![start];
        let mut links = Vec::new();
        let mut queue = VecDeque::from([start]);
        let mut status = FamilyStatus::Survives;
        if self.chain_basis[start].variant == Variant::Graph {
            return HomotopySet { members: vec![(Scalar::one(), start)], links, status };
        }
        let root = self.class_of[start];
        let rels: Vec<&Relation> = self.relations.iter().filter(|r| self.class_of[r.terms[0].0] == root).collect();
        while let Some(x) = queue.pop_front() {
            for r in &rels {
                let Some(kx) = r.terms.iter().position(|(i, _)| *i == x) else { continue };
                if r.terms.len() == 1 {
                    status = if !r.h.path.is_stationary() {
                        FamilyStatus::NullN1
                    } else if r.from_source[kx] {
                        FamilyStatus::NullN2
                    } else {
                        FamilyStatus::NullN3
                    };
                    continue;
                }
                if r.terms.len() != 2 {
                    continue;
                }
                let (y, ky) = (r.terms[1 - kx].0, 1 - kx);
                if coeff.contains_key(&y) {
                    continue;
                }
                // a x + b y is null, and start ~ c_x x, so start ~ -c_x b / a y.
                let (a, b) = (&r.terms[kx].1, &r.terms[ky].1);
                let cy = -(&coeff[&x] * b / a);
                coeff.insert(y, cy);
                order.push(y);
                links.push(r.h.clone());
                queue.push_back(y);
            }
        }
        let members: Vec<(Scalar, usize)> = order.iter().map(|i| (coeff[i].clone(), *i)).collect();
        if status == FamilyStatus::Survives {
            let ms: Vec<usize> = {
                let mut m: Vec<usize> = (0..self.chain_basis.len()).filter(|&i| self.class_of[i] == root).collect();
                m.sort_unstable();
                m
            };
            let rel_ids: Vec<usize> = (0..self.relations.len()).filter(|&k| self.class_of[self.relations[k].terms[0].0] == root).collect();
            if count_deficiency(self, &ms, &rel_ids) == 0 {
                status = FamilyStatus::NullCycle;
            }
        }
        HomotopySet { members, links, status }
    }

    /// Number of classes that survive, for cross-checks.
    pub fn surviving_quasi_classes(&self) -> usize {
        self.theta.iter().filter(|b| b.variant == Variant::QuasiRep).count()
    }
}

/// Realize a basis morphism as an explicit graded map of degree 0.
pub fn realize(m: &BasisMorphism, v: &Side, w: &Side) -> GradedMap {
    let mut g = GradedMap::new(0);
    for c in &m.components {
        g.push(c.degree, Entry { row: v.nodes[c.src].slot, col: w.nodes[c.tgt].slot, scalar: c.scalar.clone(), path: c.path.clone() });
    }
    g
}

/// Realize an elementary homotopy as a graded map of degree -1.
pub fn realize_homotopy(h: &Component, v: &Side, w: &Side) -> GradedMap {
    let mut g = GradedMap::new(-1);
    g.push(h.degree, Entry { row: v.nodes[h.src].slot, col: w.nodes[h.tgt].slot, scalar: h.scalar.clone(), path: h.path.clone() });
    g
}

/// Full analysis for a pair of words.
pub fn analyze_words(alg: &GentleAlgebra, v: &Word, w: &Word) -> Result<(Prepared, HomAnalysis), HomError> {
    let p = prepare(alg, v, w)?;
    let an = HomProblem::new(alg, &p).analyze()?;
    Ok((p, an))
}

/// Canonical basis of morphisms from the complex of `v` to that of `w`.
pub fn hom_basis(alg: &GentleAlgebra, v: &Word, w: &Word) -> Result<Vec<BasisMorphism>, HomError> {
    Ok(analyze_words(alg, v, w)?.1.theta)
}

/// Dimension of the morphism space in the derived category.
pub fn hom_dim(alg: &GentleAlgebra, v: &Word, w: &Word) -> Result<usize, HomError> {
    Ok(analyze_words(alg, v, w)?.1.dim())
}

/// Graph, single and double maps between finite words.
pub fn complex_level_basis(alg: &GentleAlgebra, v: &Word, w: &Word) -> Result<Vec<BasisMorphism>, HomError> {
    if !v.is_finite() || !w.is_finite() {
        return Err(HomError::InfiniteWord);
    }
    let p = prepare(alg, v, w)?;
    Ok(HomProblem::new(alg, &p).chain_basis())
}

/// Maximal overlaps with offset 0 (graph) or 1 (quasi-graph).
pub fn find_overlaps(alg: &GentleAlgebra, v: &Word, w: &Word, delta: i32) -> Result<Vec<Overlap>, HomError> {
    let p = prepare(alg, v, w)?;
    Ok(HomProblem::new(alg, &p).overlaps(delta))
}

/// Graph maps.
pub fn graph_maps(alg: &GentleAlgebra, v: &Word, w: &Word) -> Result<Vec<BasisMorphism>, HomError> {
    let p = prepare(alg, v, w)?;
    Ok(HomProblem::new(alg, &p).graph_maps())
}

fn theta_of(alg: &GentleAlgebra, v: &Word, w: &Word, variant: Variant) -> Result<Vec<BasisMorphism>, HomError> {
    Ok(hom_basis(alg, v, w)?.into_iter().filter(|b| b.variant == variant).collect())
}

/// Chosen quasi-graph map representatives.
pub fn quasi_graph_maps(alg: &GentleAlgebra, v: &Word, w: &Word) -> Result<Vec<BasisMorphism>, HomError> {
    theta_of(alg, v, w, Variant::QuasiRep)
}

/// Single maps forming a homotopy class on their own.
pub fn singleton_singles(alg: &GentleAlgebra, v: &Word, w: &Word) -> Result<Vec<BasisMorphism>, HomError> {
    theta_of(alg, v, w, Variant::SingletonSingle)
}

/// Double maps forming a homotopy class on their own.
pub fn singleton_doubles(alg: &GentleAlgebra, v: &Word, w: &Word) -> Result<Vec<BasisMorphism>, HomError> {
    theta_of(alg, v, w, Variant::SingletonDouble)
}

/// Homotopy family of the chain-basis element with index `element`.
pub fn homotopy_set(alg: &GentleAlgebra, v: &Word, w: &Word, element: usize) -> Result<HomotopySet, HomError> {
    let (_, an) = analyze_words(alg, v, w)?;
    if element >= an.chain_basis.len() {
        return Err(HomError::NoSuchElement(element));
    }
    Ok(an.walk(element))
}

/// JSON document for a canonical basis.
pub fn basis_json(alg: &GentleAlgebra, p: &Prepared, theta: &[BasisMorphism]) -> serde_json::Value {
    serde_json::json!({
        "schema_version": crate::SCHEMA_VERSION,
        "source": p.v.word.literal(alg),
        "target": p.w.word.literal(alg),
        "dim": theta.len(),
        "basis": theta.iter().map(|b| b.to_json(alg, &p.v, &p.w)).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldChoice;
    use crate::oracle::{chain_map_dim, oracle_hom_dim_words, verify_chain_map};
    use crate::words::enumerate_words;
    use crate::words::tests::running;

    fn sweep(max_letters: usize, lo: i32, hi: i32) {
        let alg = running();
        let (strings, bands) = enumerate_words(&alg, max_letters, lo, hi);
        let words: Vec<Word> = strings.into_iter().chain(bands).collect();
        for v in &words {
            for w in &words {
                let (p, an) = analyze_words(&alg, v, w).unwrap_or_else(|e| panic!("{} -> {}: {e}", v.literal(&alg), w.literal(&alg)));
                let want = oracle_hom_dim_words(&alg, v, w, FieldChoice::Rational).unwrap();
                assert_eq!(an.dim(), want, "{} -> {}", v.literal(&alg), w.literal(&alg));
                let chain = chain_map_dim(&alg, &p.v.complex, &p.w.complex, FieldChoice::Rational).unwrap();
                assert_eq!(an.chain_basis.len(), chain, "chain {} -> {}", v.literal(&alg), w.literal(&alg));
                for b in &an.chain_basis {
                    assert!(verify_chain_map(&alg, &p.v.complex, &p.w.complex, &realize(b, &p.v, &p.w)));
                }
            }
        }
    }

    fn infinite_words(max_letters: usize, lo: i32, hi: i32) -> Vec<Word> {
        let alg = running();
        let (strings, _) = enumerate_words(&alg, max_letters, lo, hi);
        let mut seen = BTreeSet::new();
        strings.iter().filter_map(|w| crate::words::resolve_infinite(&alg, w).ok()).filter(|w| seen.insert(w.canonical_key(&alg))).collect()
    }

    #[test]
    fn one_sided_infinite_pairs_agree_with_oracle() {
        let alg = running();
        let inf = infinite_words(2, -1, 1);
        assert!(!inf.is_empty());
        let (fin, _) = enumerate_words(&alg, 2, -1, 1);
        for x in &inf {
            for y in &fin {
                for (v, w) in [(x, y), (y, x)] {
                    let got = hom_dim(&alg, v, w).unwrap();
                    let want = oracle_hom_dim_words(&alg, v, w, FieldChoice::Rational).unwrap();
                    assert_eq!(got, want, "{} -> {}", v.literal(&alg), w.literal(&alg));
                }
            }
        }
    }

    #[test]
    fn two_infinite_words_are_shift_invariant() {
        let alg = running();
        let inf = infinite_words(2, -1, 1);
        let mut nonzero = 0;
        for v in &inf {
            for w in &inf {
                let d = hom_dim(&alg, v, w).unwrap();
                for k in [-2, 3] {
                    assert_eq!(hom_dim(&alg, &v.shift(k), &w.shift(k)).unwrap(), d);
                }
                nonzero += usize::from(d > 0);
            }
            assert!(hom_dim(&alg, v, v).unwrap() >= 1, "identity on {}", v.literal(&alg));
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn agrees_with_oracle_on_short_words() {
        sweep(3, -1, 1);
    }

    #[test]
    fn agrees_with_oracle_on_longer_words() {
        sweep(4, -2, 2);
    }
}
