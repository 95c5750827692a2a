//! Bound quivers of gentle algebras and their path combinatorics.
//!
//! Paths are stored as arrow lists in application order: the first entry is
//! applied first. The product "pq" means apply q first, then p.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub type VertexId = usize;
pub type ArrowId = usize;

/// Errors raised while parsing or querying a bound quiver.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("algebra is not gentle:\n{}", format_violations(.0))]
    NotGentle(Vec<Violation>),
    #[error("paths are not composable: {0}")]
    NonComposable(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("path `{0}` is zero in the algebra")]
    ZeroPath(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| format!("  - {x}")).collect::<Vec<_>>().join("\n")
}

/// One violated gentleness condition with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Condition (1): more than two arrows leave or enter a vertex.
    Degree { vertex: String, outgoing: bool, count: usize },
    /// Condition (2): an arrow has two continuations (or predecessors) avoiding the ideal.
    TwoNonzero { arrow: String, successors: bool, others: Vec<String> },
    /// Condition (3): an arrow has two continuations (or predecessors) inside the ideal.
    TwoZero { arrow: String, successors: bool, others: Vec<String> },
    /// The algebra is infinite dimensional: an oriented cycle has no relation.
    InfiniteDimensional { cycle: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Degree { vertex, outgoing, count } => {
                write!(f, "condition (1): vertex {vertex} has {count} {} arrows", if *outgoing { "outgoing" } else { "incoming" })
            }
            Violation::TwoNonzero { arrow, successors, others } => write!(
                f,
                "condition (2): arrow {arrow} has nonzero {} {}",
                if *successors { "successors" } else { "predecessors" },
                others.join(", ")
            ),
            Violation::TwoZero { arrow, successors, others } => write!(
                f,
                "condition (3): arrow {arrow} has zero-relation {} {}",
                if *successors { "successors" } else { "predecessors" },
                others.join(", ")
            ),
            Violation::InfiniteDimensional { cycle } => {
                write!(f, "finite dimension: oriented cycle {} carries no relation", cycle.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A quiver with length-2 monomial relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundQuiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// `(b, a)` means the path "ba" (first a, then b) is zero.
    pub relations: BTreeSet<(ArrowId, ArrowId)>,
}

/// A nonzero path of the algebra. The empty arrow list is the stationary path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: VertexId,
    pub target: VertexId,
    pub arrows: Vec<ArrowId>,
}

impl Path {
    pub fn stationary(x: VertexId) -> Self {
        Path { source: x, target: x, arrows: Vec::new() }
    }
    pub fn len(&self) -> usize {
        self.arrows.len()
    }
    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
    pub fn is_stationary(&self) -> bool {
        self.arrows.is_empty()
    }
    /// Arrow applied first.
    pub fn first(&self) -> Option<ArrowId> {
        self.arrows.first().copied()
    }
    /// Arrow applied last.
    pub fn last(&self) -> Option<ArrowId> {
        self.arrows.last().copied()
    }
}

/// A validated gentle algebra with derived lookup tables.
#[derive(Debug, Clone)]
pub struct GentleAlgebra {
    pub quiver: BoundQuiver,
    out_arrows: Vec<Vec<ArrowId>>,
    in_arrows: Vec<Vec<ArrowId>>,
    /// For arrow a: the arrow b with ba not in I.
    nonzero_after: Vec<Option<ArrowId>>,
    /// For arrow a: the arrow b with ba in I.
    zero_after: Vec<Option<ArrowId>>,
    /// For arrow b: the arrow a with ba not in I.
    nonzero_before: Vec<Option<ArrowId>>,
    /// For arrow b: the arrow a with ba in I.
    zero_before: Vec<Option<ArrowId>>,
    cycle: BTreeSet<ArrowId>,
    side: Vec<(i8, i8)>,
    arrow_index: HashMap<String, ArrowId>,
    vertex_index: HashMap<String, VertexId>,
    max_path_len: usize,
    /// Nonzero paths indexed by source then target.
    path_table: Vec<Vec<Vec<Path>>>,
    pub warnings: Vec<String>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_vertex_name(s: &str) -> bool {
    is_identifier(s) || s.parse::<i64>().is_ok()
}

/// Parse the bound-quiver DSL and validate gentleness.
pub fn parse_algebra(text: &str) -> Result<GentleAlgebra, QuiverError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut raw_relations: Vec<(usize, String, String)> = Vec::new();
    let mut vidx: HashMap<String, VertexId> = HashMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| QuiverError::Syntax { line: line_no, message: m.to_string() };
        if let Some(rest) = line.strip_prefix("vertices:") {
            for v in rest.split_whitespace() {
                if !is_vertex_name(v) {
                    return Err(err(&format!("bad vertex name `{v}`")));
                }
                if vidx.contains_key(v) {
                    return Err(err(&format!("duplicate vertex `{v}`")));
                }
                vidx.insert(v.to_string(), vertices.len());
                vertices.push(v.to_string());
            }
        } else if let Some(rest) = line.strip_prefix("arrow ") {
            let (name, ends) = rest.split_once(':').ok_or_else(|| err("expected `arrow NAME: SRC -> TGT`"))?;
            let name = name.trim();
            if !is_identifier(name) {
                return Err(err(&format!("bad arrow name `{name}`")));
            }
            if arrows.iter().any(|a| a.name == name) {
                return Err(err(&format!("duplicate arrow `{name}`")));
            }
            let (s, t) = ends.split_once("->").ok_or_else(|| err("expected `SRC -> TGT`"))?;
            let (s, t) = (s.trim(), t.trim());
            let source = *vidx.get(s).ok_or_else(|| err(&format!("undeclared vertex `{s}`")))?;
            let target = *vidx.get(t).ok_or_else(|| err(&format!("undeclared vertex `{t}`")))?;
            arrows.push(Arrow { name: name.to_string(), source, target });
        } else if let Some(rest) = line.strip_prefix("relation ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(err("relations must have exactly two arrows"));
            }
            raw_relations.push((line_no, parts[0].to_string(), parts[1].to_string()));
        } else {
            return Err(err(&format!("unrecognized statement `{line}`")));
        }
    }
    let mut relations = BTreeSet::new();
    for (line, b, a) in raw_relations {
        let find = |n: &str| arrows.iter().position(|x| x.name == n);
        let err = |m: String| QuiverError::Syntax { line, message: m };
        let bi = find(&b).ok_or_else(|| err(format!("unknown arrow `{b}` in relation")))?;
        let ai = find(&a).ok_or_else(|| err(format!("unknown arrow `{a}` in relation")))?;
        if arrows[ai].target != arrows[bi].source {
            return Err(err(format!("relation {b} {a} is not a composable path")));
        }
        relations.insert((bi, ai));
    }
    GentleAlgebra::new(BoundQuiver { vertices, arrows, relations })
}

impl GentleAlgebra {
    /// Validate a bound quiver and build lookup tables.
    pub fn new(quiver: BoundQuiver) -> Result<Self, QuiverError> {
        let nv = quiver.vertices.len();
        let na = quiver.arrows.len();
        let mut out_arrows = vec![Vec::new(); nv];
        let mut in_arrows = vec![Vec::new(); nv];
        for (i, a) in quiver.arrows.iter().enumerate() {
            out_arrows[a.source].push(i);
            in_arrows[a.target].push(i);
        }
        for v in out_arrows.iter_mut().chain(in_arrows.iter_mut()) {
            v.sort_by(|x, y| quiver.arrows[*x].name.cmp(&quiver.arrows[*y].name));
        }
        let mut violations = Vec::new();
        for x in 0..nv {
            for (outgoing, list) in [(true, &out_arrows[x]), (false, &in_arrows[x])] {
                if list.len() > 2 {
                    violations.push(Violation::Degree { vertex: quiver.vertices[x].clone(), outgoing, count: list.len() });
                }
            }
        }
        let name = |i: ArrowId| quiver.arrows[i].name.clone();
        let mut nonzero_after = vec![None; na];
        let mut zero_after = vec![None; na];
        let mut nonzero_before = vec![None; na];
        let mut zero_before = vec![None; na];
        for a in 0..na {
            let t = quiver.arrows[a].target;
            let (z, nz): (Vec<ArrowId>, Vec<ArrowId>) = out_arrows[t].iter().partition(|&&b| quiver.relations.contains(&(b, a)));
            if nz.len() > 1 {
                violations.push(Violation::TwoNonzero { arrow: name(a), successors: true, others: nz.iter().map(|&b| name(b)).collect() });
            }
            if z.len() > 1 {
                violations.push(Violation::TwoZero { arrow: name(a), successors: true, others: z.iter().map(|&b| name(b)).collect() });
            }
            nonzero_after[a] = nz.first().copied();
            zero_after[a] = z.first().copied();
            let s = quiver.arrows[a].source;
            let (z, nz): (Vec<ArrowId>, Vec<ArrowId>) = in_arrows[s].iter().partition(|&&c| quiver.relations.contains(&(a, c)));
            if nz.len() > 1 {
                violations.push(Violation::TwoNonzero { arrow: name(a), successors: false, others: nz.iter().map(|&b| name(b)).collect() });
            }
            if z.len() > 1 {
                violations.push(Violation::TwoZero { arrow: name(a), successors: false, others: z.iter().map(|&b| name(b)).collect() });
            }
            nonzero_before[a] = nz.first().copied();
            zero_before[a] = z.first().copied();
        }
        // Finite dimension: following nonzero continuations must never cycle.
        if violations.is_empty() {
            for a in 0..na {
                let mut seen = vec![false; na];
                let mut cur = a;
                let mut trail = vec![a];
                seen[a] = true;
                while let Some(b) = nonzero_after[cur] {
                    if b == a {
                        violations.push(Violation::InfiniteDimensional { cycle: trail.iter().map(|&i| name(i)).collect() });
                        break;
                    }
                    if seen[b] {
                        break;
                    }
                    seen[b] = true;
                    trail.push(b);
                    cur = b;
                }
                if !violations.is_empty() {
                    break;
                }
            }
        }
        if !violations.is_empty() {
            return Err(QuiverError::NotGentle(violations));
        }
        let mut cycle = BTreeSet::new();
        for a in 0..na {
            let mut cur = a;
            for _ in 0..na {
                match zero_after[cur] {
                    Some(b) if b == a => {
                        cycle.insert(a);
                        break;
                    }
                    Some(b) => cur = b,
                    None => break,
                }
            }
        }
        let mut max_path_len = 0;
        for a in 0..na {
            let mut len = 1;
            let mut cur = a;
            while let Some(b) = nonzero_after[cur] {
                len += 1;
                cur = b;
            }
            max_path_len = max_path_len.max(len);
        }
        let arrow_index = quiver.arrows.iter().enumerate().map(|(i, a)| (a.name.clone(), i)).collect();
        let vertex_index = quiver.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut alg = GentleAlgebra {
            quiver,
            out_arrows,
            in_arrows,
            nonzero_after,
            zero_after,
            nonzero_before,
            zero_before,
            cycle,
            side: Vec::new(),
            arrow_index,
            vertex_index,
            max_path_len,
            path_table: Vec::new(),
            warnings: Vec::new(),
        };
        alg.side = alg.compute_sides();
        let nv = alg.num_vertices();
        alg.path_table = (0..nv).map(|x| (0..nv).map(|y| alg.hom_path_basis(x, y, alg.max_path_len)).collect()).collect();
        if !alg.is_connected() {
            alg.warnings.push("quiver is not connected".to_string());
        }
        Ok(alg)
    }

    fn is_connected(&self) -> bool {
        let nv = self.num_vertices();
        if nv <= 1 {
            return true;
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &a in self.out_arrows[x].iter().chain(self.in_arrows[x].iter()) {
                let arrow = &self.quiver.arrows[a];
                for y in [arrow.source, arrow.target] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Split the arrow ends at each vertex into two sides so that the two
    /// letters of any string passing through the vertex lie on different
    /// sides. Entry `(out_side, in_side)` per arrow: the side of the arrow
    /// at its source and at its target.
    fn compute_sides(&self) -> Vec<(i8, i8)> {
        let na = self.num_arrows();
        let mut out_side = vec![0i8; na];
        let mut in_side = vec![0i8; na];
        for x in 0..self.num_vertices() {
            let outs = &self.out_arrows[x];
            let ins = &self.in_arrows[x];
            if let Some(&a0) = outs.first() {
                out_side[a0] = 1;
                if let Some(&a1) = outs.get(1) {
                    out_side[a1] = -1;
                }
                for &c in ins {
                    // a and c share a side exactly when "ac" is nonzero.
                    let partner = outs.iter().find(|&&a| !self.quiver.relations.contains(&(a, c)));
                    in_side[c] = match partner {
                        Some(&a) => out_side[a],
                        None => {
                            let a = outs.iter().find(|&&a| self.quiver.relations.contains(&(a, c))).copied();
                            match a {
                                Some(a) => -out_side[a],
                                None => 1,
                            }
                        }
                    };
                }
                if ins.len() == 2 && in_side[ins[0]] == in_side[ins[1]] {
                    in_side[ins[1]] = -in_side[ins[0]];
                }
            } else {
                for (k, &c) in ins.iter().enumerate() {
                    in_side[c] = if k == 0 { 1 } else { -1 };
                }
            }
        }
        (0..na).map(|a| (out_side[a], in_side[a])).collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver.vertices.len()
    }
    pub fn num_arrows(&self) -> usize {
        self.quiver.arrows.len()
    }
    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.quiver.arrows[a]
    }
    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.quiver.arrows[a].name
    }
    pub fn vertex_name(&self, x: VertexId) -> &str {
        &self.quiver.vertices[x]
    }
    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrow_index.get(name).copied()
    }
    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }
    pub fn out_arrows(&self, x: VertexId) -> &[ArrowId] {
        &self.out_arrows[x]
    }
    pub fn in_arrows(&self, x: VertexId) -> &[ArrowId] {
        &self.in_arrows[x]
    }
    /// The arrow b with "ba" nonzero.
    pub fn nonzero_after(&self, a: ArrowId) -> Option<ArrowId> {
        self.nonzero_after[a]
    }
    /// The arrow b with "ba" in the ideal.
    pub fn zero_after(&self, a: ArrowId) -> Option<ArrowId> {
        self.zero_after[a]
    }
    /// The arrow a with "ba" nonzero.
    pub fn nonzero_before(&self, b: ArrowId) -> Option<ArrowId> {
        self.nonzero_before[b]
    }
    /// The arrow a with "ba" in the ideal.
    pub fn zero_before(&self, b: ArrowId) -> Option<ArrowId> {
        self.zero_before[b]
    }
    /// Side of arrow `a` at its source vertex.
    pub fn out_side(&self, a: ArrowId) -> i8 {
        self.side[a].0
    }
    /// Side of arrow `a` at its target vertex.
    pub fn in_side(&self, a: ArrowId) -> i8 {
        self.side[a].1
    }
    /// Length of the longest nonzero path.
    pub fn max_path_len(&self) -> usize {
        self.max_path_len
    }

    /// True if applying `first` then `then` is zero.
    pub fn is_zero_pair(&self, first: ArrowId, then: ArrowId) -> bool {
        self.quiver.relations.contains(&(then, first))
    }

    /// The set of arrows on cycles with full relations.
    pub fn cycle_arrows(&self) -> &BTreeSet<ArrowId> {
        &self.cycle
    }

    /// The full-relation cycle through `a` listed in application order
    /// starting at `a`, if any.
    pub fn relation_cycle(&self, a: ArrowId) -> Option<Vec<ArrowId>> {
        if !self.cycle.contains(&a) {
            return None;
        }
        let mut out = vec![a];
        let mut cur = a;
        loop {
            let b = self.zero_after[cur]?;
            if b == a {
                return Some(out);
            }
            out.push(b);
            cur = b;
        }
    }

    pub fn arrow_path(&self, a: ArrowId) -> Path {
        let ar = &self.quiver.arrows[a];
        Path { source: ar.source, target: ar.target, arrows: vec![a] }
    }

    /// True if the arrow list composes and avoids the ideal.
    pub fn is_valid_arrows(&self, arrows: &[ArrowId]) -> bool {
        arrows.windows(2).all(|w| self.quiver.arrows[w[0]].target == self.quiver.arrows[w[1]].source && !self.is_zero_pair(w[0], w[1]))
    }

    /// Build a path from an application-ordered arrow list; `None` if zero.
    pub fn path_from_arrows(&self, arrows: Vec<ArrowId>) -> Option<Path> {
        if arrows.is_empty() || !self.is_valid_arrows(&arrows) {
            return None;
        }
        let source = self.quiver.arrows[arrows[0]].source;
        let target = self.quiver.arrows[*arrows.last().unwrap()].target;
        Some(Path { source, target, arrows })
    }

    /// The product "pq": apply q first, then p. `Ok(None)` is the zero path.
    pub fn compose(&self, p: &Path, q: &Path) -> Result<Option<Path>, QuiverError> {
        if q.target != p.source {
            return Err(QuiverError::NonComposable(format!("{} after {}", self.path_name(p), self.path_name(q))));
        }
        Ok(self.concat(p, q))
    }

    /// Like [`compose`](Self::compose) but treats mismatched ends as zero.
    pub fn concat(&self, p: &Path, q: &Path) -> Option<Path> {
        if q.target != p.source {
            return None;
        }
        if let (Some(x), Some(y)) = (q.last(), p.first()) {
            if self.is_zero_pair(x, y) {
                return None;
            }
        }
        let mut arrows = q.arrows.clone();
        arrows.extend_from_slice(&p.arrows);
        Some(Path { source: q.source, target: p.target, arrows })
    }

    /// All nonzero paths from x to y of length at most `max_len`, ordered by
    /// length then by arrow names in written order.
    pub fn hom_path_basis(&self, x: VertexId, y: VertexId, max_len: usize) -> Vec<Path> {
        let mut out = Vec::new();
        if x == y {
            out.push(Path::stationary(x));
        }
        let mut frontier: Vec<Path> = self.out_arrows[x].iter().map(|&a| self.arrow_path(a)).collect();
        let mut len = 1;
        while !frontier.is_empty() && len <= max_len {
            let mut level: Vec<Path> = frontier.iter().filter(|p| p.target == y).cloned().collect();
            level.sort_by_key(|p| self.path_name(p));
            out.extend(level);
            let mut next = Vec::new();
            for p in &frontier {
                if let Some(b) = self.nonzero_after[p.last().unwrap()] {
                    let mut arrows = p.arrows.clone();
                    arrows.push(b);
                    next.push(Path { source: p.source, target: self.quiver.arrows[b].target, arrows });
                }
            }
            frontier = next;
            len += 1;
        }
        out
    }

    /// All nonzero paths from x to y.
    pub fn paths_between(&self, x: VertexId, y: VertexId) -> Vec<Path> {
        self.path_table[x][y].clone()
    }

    /// Borrowed form of [`paths_between`](Self::paths_between).
    pub fn paths(&self, x: VertexId, y: VertexId) -> &[Path] {
        &self.path_table[x][y]
    }

    /// Every nonstationary nonzero path.
    pub fn all_paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        for a in 0..self.num_arrows() {
            let mut p = self.arrow_path(a);
            out.push(p.clone());
            while let Some(b) = self.nonzero_after[p.last().unwrap()] {
                p.arrows.push(b);
                p.target = self.quiver.arrows[b].target;
                out.push(p.clone());
            }
        }
        out.sort_by(|p, q| p.len().cmp(&q.len()).then_with(|| self.path_name(p).cmp(&self.path_name(q))));
        out
    }

    /// True if p extends on neither side to a longer nonzero path.
    pub fn is_maximal_path(&self, p: &Path) -> bool {
        match (p.first(), p.last()) {
            (Some(f), Some(l)) => self.nonzero_after[l].is_none() && self.nonzero_before[f].is_none(),
            _ => false,
        }
    }

    /// The maximal path starting with arrow `a`, if `a` has no nonzero predecessor.
    pub fn maximal_path_from(&self, a: ArrowId) -> Option<Path> {
        if self.nonzero_before[a].is_some() {
            return None;
        }
        let mut p = self.arrow_path(a);
        while let Some(b) = self.nonzero_after[p.last().unwrap()] {
            p.arrows.push(b);
            p.target = self.quiver.arrows[b].target;
        }
        Some(p)
    }

    /// Written name: arrows joined by `*`, leftmost applied last; `1_x` if stationary.
    pub fn path_name(&self, p: &Path) -> String {
        if p.is_stationary() {
            return format!("1_{}", self.quiver.vertices[p.source]);
        }
        p.arrows.iter().rev().map(|&a| self.quiver.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }

    /// Parse a written path name (inverse of [`path_name`](Self::path_name)).
    pub fn parse_path(&self, s: &str) -> Result<Path, QuiverError> {
        let s = s.trim();
        if let Some(v) = s.strip_prefix("1_") {
            let x = self.vertex_id(v).ok_or_else(|| QuiverError::UnknownVertex(v.to_string()))?;
            return Ok(Path::stationary(x));
        }
        let mut arrows = Vec::new();
        for n in s.split('*').rev() {
            let n = n.trim();
            arrows.push(self.arrow_id(n).ok_or_else(|| QuiverError::UnknownArrow(n.to_string()))?);
        }
        for w in arrows.windows(2) {
            if self.quiver.arrows[w[0]].target != self.quiver.arrows[w[1]].source {
                return Err(QuiverError::NonComposable(s.to_string()));
            }
        }
        self.path_from_arrows(arrows).ok_or_else(|| QuiverError::ZeroPath(s.to_string()))
    }

    /// Render the algebra in the DSL.
    pub fn to_dsl(&self) -> String {
        let mut s = format!("vertices: {}\n", self.quiver.vertices.join(" "));
        for a in &self.quiver.arrows {
            s.push_str(&format!("arrow {}: {} -> {}\n", a.name, self.quiver.vertices[a.source], self.quiver.vertices[a.target]));
        }
        for &(b, a) in &self.quiver.relations {
            s.push_str(&format!("relation {} {}\n", self.arrow_name(b), self.arrow_name(a)));
        }
        s
    }
}

/// The derived-discrete family with parameters n >= r >= 1 and m >= 0.
///
/// Vertices -m..n-1. Tail arrows a_k: k -> k+1 for k = -m..-1. Cycle arrows
/// x_k: k -> k+1 mod n named b_k for k <= n-r and c_k otherwise. Relations
/// x_k x_{k-1} for k in n-r+1..=n (mod n), so r relations on the cycle. The
/// tail carries no relations. Arrow a_{-k} is named `a_mk`.
pub fn discrete_algebra(r: usize, n: usize, m: usize) -> Result<GentleAlgebra, QuiverError> {
    if r < 1 || n < r {
        return Err(QuiverError::InvalidParams(format!("need n >= r >= 1, got r={r}, n={n}, m={m}")));
    }
    let vnames: Vec<String> = (-(m as i64)..n as i64).map(|k| k.to_string()).collect();
    let vid = |k: i64| (k + m as i64) as usize;
    let mut arrows = Vec::new();
    for k in -(m as i64)..0 {
        arrows.push(Arrow { name: format!("a_m{}", -k), source: vid(k), target: vid(k + 1) });
    }
    let cycle_start = arrows.len();
    for k in 0..n as i64 {
        let name = if (k as usize) <= n - r { format!("b_{k}") } else { format!("c_{k}") };
        arrows.push(Arrow { name, source: vid(k), target: vid((k + 1) % n as i64) });
    }
    let cyc = |k: usize| cycle_start + (k % n);
    let mut relations = BTreeSet::new();
    for v in (n - r + 1)..=n {
        relations.insert((cyc(v), cyc(v + n - 1)));
    }
    let q = BoundQuiver { vertices: vnames, arrows, relations };
    GentleAlgebra::new(q)
}

/// Convenience: map from arrow names to ids.
pub fn arrow_names(alg: &GentleAlgebra) -> BTreeMap<String, ArrowId> {
    (0..alg.num_arrows()).map(|a| (alg.arrow_name(a).to_string(), a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const RUNNING: &str = "vertices: 0 1 2 3 4\n\
        arrow a: 0 -> 1\narrow b: 1 -> 2\narrow c: 2 -> 0\n\
        arrow d: 0 -> 4\narrow e: 4 -> 3\narrow f: 3 -> 0\n\
        relation b a\nrelation c b\nrelation a c\n\
        relation e d\nrelation f e\nrelation d f\n";

    fn running() -> GentleAlgebra {
        parse_algebra(RUNNING).unwrap()
    }

    #[test]
    fn parses_running_example() {
        let a = running();
        assert_eq!(a.cycle_arrows().len(), 6);
        assert!(a.warnings.is_empty());
    }

    #[test]
    fn single_vertex_is_gentle() {
        let a = parse_algebra("vertices: x\n").unwrap();
        assert_eq!(a.num_arrows(), 0);
        assert!(a.cycle_arrows().is_empty());
    }

    #[test]
    fn three_outgoing_arrows_rejected() {
        let t = "vertices: 0 1 2 3\narrow a: 0 -> 1\narrow b: 0 -> 2\narrow c: 0 -> 3\n";
        match parse_algebra(t) {
            Err(QuiverError::NotGentle(v)) => {
                assert!(v.iter().any(|x| matches!(x, Violation::Degree { outgoing: true, count: 3, .. })))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_algebra("vertices: 0\nrelation a b\n"), Err(QuiverError::Syntax { .. })));
        assert!(matches!(parse_algebra("vertices: 0 1\narrow a: 0 -> 1\nrelation a a a\n"), Err(QuiverError::Syntax { .. })));
        assert!(matches!(parse_algebra("vertices: 0\nfoo\n"), Err(QuiverError::Syntax { .. })));
        assert!(matches!(parse_algebra("vertices: 0\narrow a: 0 -> 9\n"), Err(QuiverError::Syntax { .. })));
    }

    #[test]
    fn unrelated_loop_is_infinite_dimensional() {
        let t = "vertices: 0\narrow x: 0 -> 0\n";
        match parse_algebra(t) {
            Err(QuiverError::NotGentle(v)) => {
                assert!(v.iter().any(|x| matches!(x, Violation::InfiniteDimensional { .. })))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn composition() {
        let a = running();
        let pa = a.parse_path("a").unwrap();
        let pf = a.parse_path("f").unwrap();
        let af = a.compose(&pa, &pf).unwrap().unwrap();
        assert_eq!(a.path_name(&af), "a*f");
        assert_eq!(af.source, a.vertex_id("3").unwrap());
        assert_eq!(af.target, a.vertex_id("1").unwrap());
        let pb = a.parse_path("b").unwrap();
        assert_eq!(a.compose(&pb, &pa).unwrap(), None);
        let st = Path::stationary(pa.source);
        assert_eq!(a.compose(&pa, &st).unwrap().unwrap(), pa);
        assert!(a.compose(&pa, &pb).is_err());
    }

    #[test]
    fn path_bases() {
        let a = running();
        let v = |s: &str| a.vertex_id(s).unwrap();
        let names = |x, y| a.hom_path_basis(v(x), v(y), 10).iter().map(|p| a.path_name(p)).collect::<Vec<_>>();
        assert_eq!(names("3", "1"), vec!["a*f"]);
        assert_eq!(names("0", "0"), vec!["1_0"]);
        assert!(names("1", "0").is_empty());
    }

    #[test]
    fn discrete_family() {
        let l = discrete_algebra(1, 3, 1).unwrap();
        assert_eq!(l.num_vertices(), 4);
        assert!(l.cycle_arrows().is_empty());
        let l = discrete_algebra(2, 2, 0).unwrap();
        assert_eq!(l.cycle_arrows().len(), 2);
        let l = discrete_algebra(1, 1, 3).unwrap();
        assert_eq!(l.num_vertices(), 4);
        assert_eq!(l.cycle_arrows().len(), 1);
        assert!(discrete_algebra(2, 3, 1).unwrap().cycle_arrows().is_empty());
        assert!(matches!(discrete_algebra(0, 1, 1), Err(QuiverError::InvalidParams(_))));
    }

    #[test]
    fn sides_separate_string_neighbours() {
        let a = running();
        for x in 0..a.num_vertices() {
            let outs = a.out_arrows(x);
            if outs.len() == 2 {
                assert_ne!(a.out_side(outs[0]), a.out_side(outs[1]));
            }
            for &o in outs {
                for &i in a.in_arrows(x) {
                    let same = a.out_side(o) == a.in_side(i);
                    assert_eq!(same, !a.is_zero_pair(i, o));
                }
            }
        }
    }

    #[test]
    fn maximal_paths() {
        let a = running();
        let af = a.parse_path("a*f").unwrap();
        assert!(a.is_maximal_path(&af));
        assert!(!a.is_maximal_path(&a.parse_path("a").unwrap()));
        assert_eq!(a.maximal_path_from(a.arrow_id("f").unwrap()).unwrap(), af);
        assert_eq!(a.maximal_path_from(a.arrow_id("a").unwrap()), None);
    }
}
