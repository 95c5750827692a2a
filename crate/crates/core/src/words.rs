//! Homotopy letters and words: strings, bands and eventually periodic
//! infinite strings, with canonical forms, literals and enumeration.
//!
//! Letters are stored in written order (leftmost first). A letter `(p,i,j)`
//! has a left node at degree `i` with vertex `t(letter)` and a right node at
//! degree `j` with vertex `s(letter)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{format_scalar, parse_scalar, Scalar};
use crate::quiver::{ArrowId, GentleAlgebra, Path, QuiverError, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("letter {index}: {reason}")]
    InvalidLetter { index: usize, reason: String },
    #[error("junction after letter {index} violates condition ({condition})")]
    InvalidJunction { index: usize, condition: u8 },
    #[error("junction after letter {index}: degrees do not match")]
    DegreeMismatch { index: usize },
    #[error("junction after letter {index}: vertices do not match")]
    EndpointMismatch { index: usize },
    #[error("band is a proper power")]
    NotPrimitive,
    #[error("band axiom violated: {0}")]
    BandAxiom(String),
    #[error("operation needs a {0}")]
    KindMismatch(&'static str),
    #[error("infinite tail invalid: {0}")]
    BadTail(String),
    #[error("cannot parse word literal: {0}")]
    Parse(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// A homotopy letter `(p, i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub path: Path,
    pub i: i32,
    pub j: i32,
}

impl Letter {
    pub fn new(path: Path, i: i32, j: i32) -> Self {
        Letter { path, i, j }
    }
    pub fn is_direct(&self) -> bool {
        self.j == self.i + 1
    }
    pub fn is_inverse(&self) -> bool {
        self.j == self.i - 1
    }
    pub fn is_trivial(&self) -> bool {
        self.i == self.j
    }
    /// Vertex of the right node.
    pub fn s(&self) -> VertexId {
        if self.is_inverse() {
            self.path.target
        } else {
            self.path.source
        }
    }
    /// Vertex of the left node.
    pub fn t(&self) -> VertexId {
        if self.is_inverse() {
            self.path.source
        } else {
            self.path.target
        }
    }
    pub fn inverse(&self) -> Letter {
        Letter { path: self.path.clone(), i: self.j, j: self.i }
    }
    pub fn shifted(&self, k: i32) -> Letter {
        Letter { path: self.path.clone(), i: self.i - k, j: self.j - k }
    }
    /// True for a direct or inverse letter whose path is one arrow.
    pub fn is_arrow(&self) -> bool {
        self.path.len() == 1 && !self.is_trivial()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordKind {
    String,
    Band,
    LeftInfinite,
    RightInfinite,
    TwoSidedInfinite,
}

impl WordKind {
    pub fn is_infinite(self) -> bool {
        matches!(self, WordKind::LeftInfinite | WordKind::RightInfinite | WordKind::TwoSidedInfinite)
    }
    pub fn name(self) -> &'static str {
        match self {
            WordKind::String => "string",
            WordKind::Band => "band",
            WordKind::LeftInfinite => "left-infinite",
            WordKind::RightInfinite => "right-infinite",
            WordKind::TwoSidedInfinite => "two-sided-infinite",
        }
    }
}

/// A validated homotopy string, band or infinite string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    pub kind: WordKind,
    /// Written order. For infinite kinds this is the finite core.
    pub letters: Vec<Letter>,
    /// One period of the left tail, the copy next to the core, written order.
    pub left_period: Vec<Letter>,
    /// One period of the right tail, the copy next to the core, written order.
    pub right_period: Vec<Letter>,
    /// Band scalar and the index of the letter carrying it.
    pub lambda: Scalar,
    pub lambda_at: usize,
    /// Band dimension.
    pub dim: usize,
    /// Marks the formal inverse of a trivial string.
    pub formal_inverse: bool,
}

/// Check the junction of written letters `l` (left) and `r` (right).
pub fn junction(alg: &GentleAlgebra, l: &Letter, r: &Letter, index: usize) -> Result<(), WordError> {
    if l.j != r.i {
        return Err(WordError::DegreeMismatch { index });
    }
    if l.s() != r.t() {
        return Err(WordError::EndpointMismatch { index });
    }
    if l.is_trivial() || r.is_trivial() {
        return Err(WordError::InvalidLetter { index, reason: "trivial letter inside a word".into() });
    }
    let (lp, rp) = (&l.path, &r.path);
    let (ok, cond) = match (l.is_direct(), r.is_direct()) {
        (true, true) => (alg.is_zero_pair(rp.last().unwrap(), lp.first().unwrap()), 1),
        (false, false) => (alg.is_zero_pair(lp.last().unwrap(), rp.first().unwrap()), 2),
        (true, false) => (lp.first() != rp.first(), 3),
        (false, true) => (lp.last() != rp.last(), 4),
    };
    if ok {
        Ok(())
    } else {
        Err(WordError::InvalidJunction { index, condition: cond })
    }
}

fn check_letter(alg: &GentleAlgebra, l: &Letter, index: usize) -> Result<(), WordError> {
    let bad = |m: &str| WordError::InvalidLetter { index, reason: m.to_string() };
    if (l.i - l.j).abs() > 1 {
        return Err(bad("degrees differ by more than one"));
    }
    if l.is_trivial() != l.path.is_stationary() {
        return Err(bad("a letter is trivial exactly when its path is stationary"));
    }
    if !l.path.is_stationary() && alg.path_from_arrows(l.path.arrows.clone()).as_ref() != Some(&l.path) {
        return Err(bad("path is zero or malformed"));
    }
    Ok(())
}

fn check_chain(alg: &GentleAlgebra, letters: &[Letter], offset: usize) -> Result<(), WordError> {
    for (k, l) in letters.iter().enumerate() {
        check_letter(alg, l, offset + k)?;
    }
    for k in 1..letters.len() {
        junction(alg, &letters[k - 1], &letters[k], offset + k - 1)?;
    }
    Ok(())
}

fn period_shift(period: &[Letter]) -> i32 {
    period.first().map_or(0, |f| f.i) - period.last().map_or(0, |l| l.j)
}

impl Word {
    fn raw(kind: WordKind, letters: Vec<Letter>) -> Word {
        Word {
            kind,
            letters,
            left_period: Vec::new(),
            right_period: Vec::new(),
            lambda: Scalar::one(),
            lambda_at: 0,
            dim: 1,
            formal_inverse: false,
        }
    }

    /// The trivial string at vertex x in degree `deg`.
    pub fn trivial(x: VertexId, deg: i32, formal_inverse: bool) -> Word {
        let mut w = Word::raw(WordKind::String, vec![Letter::new(Path::stationary(x), deg, deg)]);
        w.formal_inverse = formal_inverse;
        w
    }

    /// Validate a finite homotopy string.
    pub fn string(alg: &GentleAlgebra, letters: Vec<Letter>) -> Result<Word, WordError> {
        if letters.is_empty() {
            return Err(WordError::Parse("empty word".into()));
        }
        if letters.len() == 1 && letters[0].is_trivial() {
            check_letter(alg, &letters[0], 0)?;
            return Ok(Word::raw(WordKind::String, letters));
        }
        check_chain(alg, &letters, 0)?;
        Ok(Word::raw(WordKind::String, letters))
    }

    /// Validate a band with scalar on the last written letter.
    pub fn band(alg: &GentleAlgebra, letters: Vec<Letter>, lambda: Scalar, dim: usize) -> Result<Word, WordError> {
        let n = letters.len();
        Word::band_at(alg, letters, lambda, n.saturating_sub(1), dim)
    }

    /// Validate a band with scalar on the letter at `lambda_at`.
    pub fn band_at(alg: &GentleAlgebra, letters: Vec<Letter>, lambda: Scalar, lambda_at: usize, dim: usize) -> Result<Word, WordError> {
        let n = letters.len();
        if n < 2 {
            return Err(WordError::BandAxiom("a band needs at least two letters".into()));
        }
        if lambda.is_zero() {
            return Err(WordError::BandAxiom("band scalar must be nonzero".into()));
        }
        if dim == 0 {
            return Err(WordError::BandAxiom("band dimension must be positive".into()));
        }
        if lambda_at >= n {
            return Err(WordError::BandAxiom("scalar position out of range".into()));
        }
        check_chain(alg, &letters, 0)?;
        let (first, last) = (&letters[0], &letters[n - 1]);
        if first.i != last.j {
            return Err(WordError::BandAxiom("end degrees differ".into()));
        }
        if first.is_direct() == last.is_direct() {
            return Err(WordError::BandAxiom("exactly one end letter must be direct".into()));
        }
        junction(alg, last, first, n - 1).map_err(|e| WordError::BandAxiom(format!("closing {e}")))?;
        if is_proper_power(&letters) {
            return Err(WordError::NotPrimitive);
        }
        let mut w = Word::raw(WordKind::Band, letters);
        w.lambda = lambda;
        w.lambda_at = lambda_at;
        w.dim = dim;
        Ok(w)
    }

    /// Validate an infinite word from its core and tail periods.
    pub fn infinite(
        alg: &GentleAlgebra,
        left_period: Vec<Letter>,
        core: Vec<Letter>,
        right_period: Vec<Letter>,
    ) -> Result<Word, WordError> {
        let kind = match (left_period.is_empty(), right_period.is_empty()) {
            (false, true) => WordKind::LeftInfinite,
            (true, false) => WordKind::RightInfinite,
            (false, false) => WordKind::TwoSidedInfinite,
            (true, true) => return Err(WordError::BadTail("no infinite tail".into())),
        };
        if core.is_empty() {
            return Err(WordError::BadTail("empty core".into()));
        }
        check_chain(alg, &core, 0)?;
        if !left_period.is_empty() {
            check_tail(alg, &left_period, true)?;
            junction(alg, left_period.last().unwrap(), &core[0], 0)
                .map_err(|e| WordError::BadTail(format!("left tail does not attach: {e}")))?;
        }
        if !right_period.is_empty() {
            check_tail(alg, &right_period, false)?;
            junction(alg, core.last().unwrap(), &right_period[0], core.len())
                .map_err(|e| WordError::BadTail(format!("right tail does not attach: {e}")))?;
        }
        let mut w = Word::raw(kind, core);
        w.left_period = left_period;
        w.right_period = right_period;
        w.normalize_tails();
        Ok(w)
    }

    /// Absorb core letters that continue a periodic tail.
    fn normalize_tails(&mut self) {
        if !self.left_period.is_empty() {
            while self.letters.len() > 1 {
                let m = self.left_period.len() as i32;
                let next = self.left_period[0].shifted(-m);
                if next != self.letters[0] {
                    break;
                }
                let l = self.letters.remove(0);
                self.left_period.remove(0);
                self.left_period.push(l);
            }
        }
        if !self.right_period.is_empty() {
            while self.letters.len() > 1 {
                let m = self.right_period.len();
                let shift = period_shift(&self.right_period);
                let next = self.right_period[m - 1].shifted(-shift);
                if next != *self.letters.last().unwrap() {
                    break;
                }
                let l = self.letters.pop().unwrap();
                self.right_period.pop();
                self.right_period.insert(0, l);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
    pub fn is_trivial(&self) -> bool {
        self.kind == WordKind::String && self.letters.len() == 1 && self.letters[0].is_trivial()
    }
    pub fn is_band(&self) -> bool {
        self.kind == WordKind::Band
    }
    pub fn is_finite(&self) -> bool {
        !self.kind.is_infinite()
    }

    /// Letter at an extended position: core positions are `0..len`, the left
    /// tail uses negative positions and the right tail positions `>= len`.
    /// Bands repeat periodically.
    pub fn letter_at(&self, k: i64) -> Option<Letter> {
        let n = self.letters.len() as i64;
        if self.kind == WordKind::Band {
            return Some(self.letters[k.rem_euclid(n) as usize].clone());
        }
        if (0..n).contains(&k) {
            return Some(self.letters[k as usize].clone());
        }
        if k < 0 && !self.left_period.is_empty() {
            let m = self.left_period.len() as i64;
            let t = -k - 1;
            let copy = t / m;
            let idx = (m - 1 - t % m) as usize;
            let shift = period_shift(&self.left_period) as i64;
            return Some(self.left_period[idx].shifted((-copy * shift) as i32));
        }
        if k >= n && !self.right_period.is_empty() {
            let m = self.right_period.len() as i64;
            let t = k - n;
            let copy = t / m;
            let idx = (t % m) as usize;
            let shift = period_shift(&self.right_period) as i64;
            return Some(self.right_period[idx].shifted((copy * shift) as i32));
        }
        None
    }

    /// Degree of the leftmost core node.
    pub fn left_degree(&self) -> i32 {
        self.letters[0].i
    }
    /// Degree of the rightmost core node.
    pub fn right_degree(&self) -> i32 {
        self.letters.last().unwrap().j
    }
    /// Vertex at the left end of the core.
    pub fn t(&self) -> VertexId {
        self.letters[0].t()
    }
    /// Vertex at the right end of the core.
    pub fn s(&self) -> VertexId {
        self.letters.last().unwrap().s()
    }

    /// Minimal and maximal degrees among finite nodes.
    pub fn degree_range(&self) -> (i32, i32) {
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for l in &self.letters {
            lo = lo.min(l.i.min(l.j));
            hi = hi.max(l.i.max(l.j));
        }
        (lo, hi)
    }

    /// Band holonomy: the scalar read along the written direction.
    pub fn holonomy(&self) -> Scalar {
        if self.letters[self.lambda_at].is_direct() {
            self.lambda.clone()
        } else {
            self.lambda.recip()
        }
    }

    /// The inverse word. Band scalars stay on their letter.
    pub fn inverse(&self) -> Word {
        let n = self.letters.len();
        let mut w = self.clone();
        w.letters = self.letters.iter().rev().map(Letter::inverse).collect();
        w.left_period = self.right_period.iter().rev().map(Letter::inverse).collect();
        w.right_period = self.left_period.iter().rev().map(Letter::inverse).collect();
        w.kind = match self.kind {
            WordKind::LeftInfinite => WordKind::RightInfinite,
            WordKind::RightInfinite => WordKind::LeftInfinite,
            k => k,
        };
        if self.kind == WordKind::Band {
            w.lambda_at = n - 1 - self.lambda_at;
        }
        if self.is_trivial() {
            w.formal_inverse = !self.formal_inverse;
        }
        w
    }

    /// Cyclic rotation so that paper letter `k` (counted from the right,
    /// 1-based) becomes the leftmost letter.
    pub fn rotate(&self, k: usize) -> Result<Word, WordError> {
        if self.kind != WordKind::Band {
            return Err(WordError::KindMismatch("band"));
        }
        let n = self.letters.len();
        let start = (n - k % n) % n;
        let mut w = self.clone();
        w.letters = (0..n).map(|t| self.letters[(start + t) % n].clone()).collect();
        w.lambda_at = (self.lambda_at + n - start) % n;
        Ok(w)
    }

    /// Apply the suspension k times: every degree decreases by k.
    pub fn shift(&self, k: i32) -> Word {
        let mut w = self.clone();
        for l in w.letters.iter_mut().chain(w.left_period.iter_mut()).chain(w.right_period.iter_mut()) {
            *l = l.shifted(k);
        }
        w
    }

    /// Same band with another scalar (kept on the same letter) and dimension.
    pub fn with_band_data(&self, lambda: Scalar, dim: usize) -> Word {
        let mut w = self.clone();
        w.lambda = lambda;
        w.dim = dim;
        w
    }

    /// Move the band scalar onto the last written letter without changing the
    /// isomorphism class.
    pub fn normalized_band(&self) -> Word {
        let mut w = self.clone();
        let n = w.letters.len();
        let h = self.holonomy();
        w.lambda_at = n - 1;
        w.lambda = if w.letters[n - 1].is_direct() { h } else { h.recip() };
        w
    }

    /// Render as a word literal.
    pub fn literal(&self, alg: &GentleAlgebra) -> String {
        let letters = |ls: &[Letter]| ls.iter().map(|l| letter_literal(alg, l, false)).collect::<String>();
        match self.kind {
            WordKind::String if self.is_trivial() => letter_literal(alg, &self.letters[0], self.formal_inverse),
            WordKind::String => letters(&self.letters),
            WordKind::Band => {
                let w = self.normalized_band();
                format!("{}@λ={},r={}", letters(&w.letters), format_scalar(&w.lambda), w.dim)
            }
            _ => {
                let mut s = String::new();
                if !self.left_period.is_empty() {
                    s.push_str(&format!("[{}]^inf ", letters(&self.left_period)));
                }
                s.push_str(&letters(&self.letters));
                if !self.right_period.is_empty() {
                    s.push_str(&format!(" [{}]^inf", letters(&self.right_period)));
                }
                s
            }
        }
    }

    /// Canonical representative of the isomorphism class.
    pub fn canonical(&self, alg: &GentleAlgebra) -> Word {
        match self.kind {
            WordKind::Band => {
                let n = self.letters.len();
                let mut best: Option<(String, Scalar, Word)> = None;
                for base in [self.clone(), self.inverse()] {
                    for k in 0..n {
                        let w = base.rotate(k).expect("band").normalized_band();
                        let key = letters_literal(alg, &w.letters);
                        let better = match &best {
                            None => true,
                            Some((bk, bl, _)) => (&key, &w.lambda) < (bk, bl),
                        };
                        if better {
                            best = Some((key, w.lambda.clone(), w));
                        }
                    }
                }
                best.unwrap().2
            }
            _ if self.is_trivial() => {
                let mut w = self.clone();
                w.formal_inverse = false;
                w
            }
            _ => {
                let inv = self.inverse();
                if inv.literal(alg) < self.literal(alg) {
                    inv
                } else {
                    self.clone()
                }
            }
        }
    }

    /// Key equal for two words exactly when they present isomorphic objects.
    pub fn canonical_key(&self, alg: &GentleAlgebra) -> String {
        self.canonical(alg).literal(alg)
    }
}

fn check_tail(alg: &GentleAlgebra, period: &[Letter], left: bool) -> Result<(), WordError> {
    let bad = |m: &str| WordError::BadTail(m.to_string());
    for l in period {
        if !l.is_arrow() {
            return Err(bad("tail letters must be arrows"));
        }
        if left != l.is_direct() {
            return Err(bad("left tails are direct and right tails inverse"));
        }
        if !alg.cycle_arrows().contains(&l.path.arrows[0]) {
            return Err(bad("tail arrow is not on a cycle with full relations"));
        }
    }
    let mut arrows: Vec<ArrowId> = period.iter().map(|l| l.path.arrows[0]).collect();
    arrows.sort_unstable();
    arrows.dedup();
    if arrows.len() != period.len() {
        return Err(bad("tail period repeats an arrow"));
    }
    check_chain(alg, period, 0)?;
    let shift = period_shift(period);
    let (l, r) = (period.last().unwrap().clone(), period[0].shifted(shift));
    junction(alg, &l, &r, 0).map_err(|e| WordError::BadTail(format!("period does not close up: {e}")))?;
    let a = period[0].path.arrows[0];
    let cyc = alg.relation_cycle(a).unwrap();
    if cyc.len() != period.len() {
        return Err(bad("period is not a whole cycle"));
    }
    Ok(())
}

fn is_proper_power(letters: &[Letter]) -> bool {
    let n = letters.len();
    (1..n).any(|d| n.is_multiple_of(d) && (0..n).all(|k| letters[k] == letters[(k + d) % n]))
}

pub fn letter_literal(alg: &GentleAlgebra, l: &Letter, formal_inverse: bool) -> String {
    let name = alg.path_name(&l.path);
    let mark = if formal_inverse { "~" } else { "" };
    format!("({mark}{name},{},{})", l.i, l.j)
}

pub fn letters_literal(alg: &GentleAlgebra, ls: &[Letter]) -> String {
    ls.iter().map(|l| letter_literal(alg, l, false)).collect()
}

/// Parse a word literal.
pub fn parse_word(alg: &GentleAlgebra, text: &str) -> Result<Word, WordError> {
    let text = text.trim();
    let (body, band) = match text.split_once('@') {
        Some((b, suffix)) => (b.trim(), Some(parse_band_suffix(suffix)?)),
        None => (text, None),
    };
    let mut rest = body;
    let mut left_period = Vec::new();
    if rest.starts_with('[') {
        let end = rest.find("]^inf").ok_or_else(|| WordError::Parse("expected `]^inf`".into()))?;
        left_period = parse_letters(alg, &rest[1..end])?.0;
        rest = rest[end + 5..].trim_start();
    }
    let mut right_period = Vec::new();
    let core_text = if let Some(pos) = rest.find('[') {
        let tail = &rest[pos..];
        let end = tail.find("]^inf").ok_or_else(|| WordError::Parse("expected `]^inf`".into()))?;
        if !tail[end + 5..].trim().is_empty() {
            return Err(WordError::Parse("text after right tail".into()));
        }
        right_period = parse_letters(alg, &tail[1..end])?.0;
        rest[..pos].trim()
    } else {
        rest
    };
    let (core, formal) = parse_letters(alg, core_text)?;
    if !left_period.is_empty() || !right_period.is_empty() {
        if band.is_some() {
            return Err(WordError::Parse("infinite words carry no band data".into()));
        }
        return Word::infinite(alg, left_period, core, right_period);
    }
    match band {
        Some((lambda, dim)) => Word::band(alg, core, lambda, dim),
        None => {
            let mut w = Word::string(alg, core)?;
            if w.is_trivial() {
                w.formal_inverse = formal;
            } else if formal {
                return Err(WordError::Parse("`~` marks only trivial strings".into()));
            }
            Ok(w)
        }
    }
}

fn parse_band_suffix(s: &str) -> Result<(Scalar, usize), WordError> {
    let mut lambda = Scalar::one();
    let mut dim = 1usize;
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| WordError::Parse(format!("bad band field `{part}`")))?;
        match k.trim() {
            "λ" | "lambda" | "l" => {
                lambda = parse_scalar(v).map_err(|e| WordError::Parse(e.to_string()))?;
            }
            "r" => dim = v.trim().parse().map_err(|_| WordError::Parse(format!("bad dimension `{v}`")))?,
            other => return Err(WordError::Parse(format!("unknown band field `{other}`"))),
        }
    }
    Ok((lambda, dim))
}

fn parse_letters(alg: &GentleAlgebra, s: &str) -> Result<(Vec<Letter>, bool), WordError> {
    let mut out = Vec::new();
    let mut formal = false;
    let mut rest = s.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(WordError::Parse(format!("expected `(` at `{rest}`")));
        }
        let end = rest.find(')').ok_or_else(|| WordError::Parse("unclosed letter".into()))?;
        let inner = &rest[1..end];
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(WordError::Parse(format!("letter `{inner}` needs three fields")));
        }
        let mut pname = parts[0];
        if let Some(p) = pname.strip_prefix('~') {
            formal = true;
            pname = p;
        }
        let path = alg.parse_path(pname)?;
        let i: i32 = parts[1].parse().map_err(|_| WordError::Parse(format!("bad degree `{}`", parts[1])))?;
        let j: i32 = parts[2].parse().map_err(|_| WordError::Parse(format!("bad degree `{}`", parts[2])))?;
        out.push(Letter::new(path, i, j));
        rest = rest[end + 1..].trim_start();
    }
    if out.is_empty() {
        return Err(WordError::Parse("no letters".into()));
    }
    Ok((out, formal))
}

impl fmt::Display for WordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a string does not resolve to an infinite one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unresolvable {
    NotResolvable,
    NotPrimitive,
}

/// The cycle arrow resolving `letters` on the left, if any.
pub fn left_resolving_arrow(alg: &GentleAlgebra, letters: &[Letter]) -> Option<ArrowId> {
    let first = letters.first()?;
    if !first.is_direct() {
        return None;
    }
    if letters.iter().skip(1).any(|l| l.i < first.i || l.j < first.i) {
        return None;
    }
    alg.cycle_arrows().iter().copied().find(|&a| {
        let l = Letter::new(alg.arrow_path(a), first.i - 1, first.i);
        junction(alg, &l, first, 0).is_ok()
    })
}

/// The cycle arrow resolving `letters` on the right, if any.
pub fn right_resolving_arrow(alg: &GentleAlgebra, letters: &[Letter]) -> Option<ArrowId> {
    let rev: Vec<Letter> = letters.iter().rev().map(Letter::inverse).collect();
    left_resolving_arrow(alg, &rev)
}

fn primitive_left(alg: &GentleAlgebra, letters: &[Letter]) -> bool {
    for t in 1..letters.len() {
        if !letters[..t].iter().all(|l| l.is_direct() && l.is_arrow()) {
            break;
        }
        if left_resolving_arrow(alg, &letters[t..]).is_some() {
            return false;
        }
    }
    true
}

fn left_tail(alg: &GentleAlgebra, a: ArrowId, deg: i32) -> Vec<Letter> {
    let cyc = alg.relation_cycle(a).unwrap();
    let m = cyc.len() as i32;
    cyc.iter().rev().enumerate().map(|(k, &x)| Letter::new(alg.arrow_path(x), deg - m + k as i32, deg - m + k as i32 + 1)).collect()
}

/// Attach the resolving cycles to a primitive resolvable string.
pub fn resolve_infinite(alg: &GentleAlgebra, w: &Word) -> Result<Word, Unresolvable> {
    if w.kind != WordKind::String || w.is_trivial() {
        return Err(Unresolvable::NotResolvable);
    }
    let rev: Vec<Letter> = w.letters.iter().rev().map(Letter::inverse).collect();
    let la = left_resolving_arrow(alg, &w.letters);
    let ra = left_resolving_arrow(alg, &rev);
    if la.is_none() && ra.is_none() {
        return Err(Unresolvable::NotResolvable);
    }
    if la.is_some() && !primitive_left(alg, &w.letters) || ra.is_some() && !primitive_left(alg, &rev) {
        return Err(Unresolvable::NotPrimitive);
    }
    let left = la.map(|a| left_tail(alg, a, w.left_degree())).unwrap_or_default();
    let right = ra.map(|a| left_tail(alg, a, w.right_degree()).iter().rev().map(Letter::inverse).collect()).unwrap_or_default();
    Word::infinite(alg, left, w.letters.clone(), right).map_err(|_| Unresolvable::NotResolvable)
}

/// Every letter with nonstationary path and both degrees in `[lo, hi]`.
pub fn all_letters(alg: &GentleAlgebra, lo: i32, hi: i32) -> Vec<Letter> {
    let mut out = Vec::new();
    for p in alg.all_paths() {
        for i in lo..hi {
            out.push(Letter::new(p.clone(), i, i + 1));
            out.push(Letter::new(p.clone(), i + 1, i));
        }
    }
    out
}

/// Canonical strings and bands with at most `max_letters` letters and all
/// degrees in `[lo, hi]`, in a deterministic order.
pub fn enumerate_words(alg: &GentleAlgebra, max_letters: usize, lo: i32, hi: i32) -> (Vec<Word>, Vec<Word>) {
    let mut strings: BTreeMap<String, Word> = BTreeMap::new();
    let mut bands: BTreeMap<String, Word> = BTreeMap::new();
    for x in 0..alg.num_vertices() {
        for d in lo..=hi {
            let w = Word::trivial(x, d, false);
            strings.insert(w.canonical_key(alg), w);
        }
    }
    let letters = all_letters(alg, lo, hi);
    let mut by_left: BTreeMap<(VertexId, i32), Vec<&Letter>> = BTreeMap::new();
    for l in &letters {
        by_left.entry((l.t(), l.i)).or_default().push(l);
    }
    let mut stack: Vec<Vec<Letter>> = letters.iter().map(|l| vec![l.clone()]).collect();
    while let Some(cur) = stack.pop() {
        let w = Word::raw(WordKind::String, cur.clone());
        let key = w.canonical_key(alg);
        strings.entry(key).or_insert_with(|| w.canonical(alg));
        if cur.len() >= 2 {
            if let Ok(b) = Word::band(alg, cur.clone(), Scalar::one(), 1) {
                let key = b.canonical_key(alg);
                bands.entry(key).or_insert_with(|| b.canonical(alg));
            }
        }
        if cur.len() < max_letters {
            let last = cur.last().unwrap();
            if let Some(next) = by_left.get(&(last.s(), last.j)) {
                for r in next {
                    if junction(alg, last, r, 0).is_ok() {
                        let mut ext = cur.clone();
                        ext.push((*r).clone());
                        stack.push(ext);
                    }
                }
            }
        }
    }
    (strings.into_values().collect(), bands.into_values().collect())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::field::scalar;
    use crate::quiver::parse_algebra;

    pub const RUNNING: &str = "vertices: 0 1 2 3 4\n\
        arrow a: 0 -> 1\narrow b: 1 -> 2\narrow c: 2 -> 0\n\
        arrow d: 0 -> 4\narrow e: 4 -> 3\narrow f: 3 -> 0\n\
        relation b a\nrelation c b\nrelation a c\n\
        relation e d\nrelation f e\nrelation d f\n";

    pub fn running() -> GentleAlgebra {
        parse_algebra(RUNNING).unwrap()
    }

    pub const W23: &str = "(e,2,1)(f,1,0)(c,0,1)(b,1,2)(a*f,2,3)";
    pub const Z: &str = "(d,3,2)(e,2,1)(f,1,0)(c,0,1)(b,1,2)(a,2,3)@λ=1";

    #[test]
    fn validates_examples() {
        let a = running();
        let w = parse_word(&a, W23).unwrap();
        assert_eq!(w.kind, WordKind::String);
        assert_eq!(w.literal(&a), W23);
        let z = parse_word(&a, Z).unwrap();
        assert_eq!(z.kind, WordKind::Band);
        assert!(matches!(
            parse_word(&a, "(c,0,1)(a,1,2)"),
            Err(WordError::EndpointMismatch { .. }) | Err(WordError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn junction_conditions_reported() {
        let a = running();
        assert!(parse_word(&a, "(b,0,1)(a,1,2)").is_ok());
        match parse_word(&a, "(a,0,1)(f,1,2)") {
            Err(WordError::InvalidJunction { condition: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_word(&a, "(a,0,1)(a,1,0)") {
            Err(WordError::InvalidJunction { condition: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn group_laws() {
        let a = running();
        let w = parse_word(&a, W23).unwrap();
        assert_eq!(w.inverse().inverse(), w);
        assert_eq!(w.shift(1).shift(-1), w);
        let z = parse_word(&a, Z).unwrap();
        assert_eq!(z.rotate(6).unwrap(), z);
        assert_eq!(w.canonical_key(&a), w.inverse().canonical_key(&a));
        assert_eq!(z.canonical_key(&a), z.rotate(2).unwrap().canonical_key(&a));
    }

    #[test]
    fn band_scalar_inversion() {
        let a = running();
        let z2 = parse_word(&a, Z).unwrap().with_band_data(scalar(2), 1);
        let inv_lit = format!("{}@λ=1/2", letters_literal(&a, &z2.inverse().letters));
        let zi = parse_word(&a, &inv_lit).unwrap();
        assert_eq!(z2.canonical_key(&a), zi.canonical_key(&a));
        let z1 = parse_word(&a, Z).unwrap();
        assert_ne!(z1.canonical_key(&a), z2.canonical_key(&a));
    }

    #[test]
    fn trivial_words() {
        let a = running();
        let t = parse_word(&a, "(1_3,0,0)").unwrap();
        assert!(t.is_trivial());
        let ti = parse_word(&a, "(~1_3,0,0)").unwrap();
        assert!(ti.formal_inverse);
        assert_eq!(t.inverse(), ti);
        assert_eq!(t.canonical_key(&a), ti.canonical_key(&a));
    }

    #[test]
    fn enumeration_small() {
        let a = running();
        let (s, b) = enumerate_words(&a, 1, 0, 1);
        assert!(b.is_empty());
        // 8 paths as (p,0,1) up to inversion, plus 10 trivial strings.
        assert_eq!(s.len(), 8 + 10);
        let (_, b) = enumerate_words(&a, 4, 0, 2);
        assert!(b.is_empty());
        let (_, b) = enumerate_words(&a, 6, 0, 3);
        let z = parse_word(&a, Z).unwrap();
        assert!(b.iter().any(|x| x.canonical_key(&a) == z.canonical_key(&a)));
    }

    #[test]
    fn resolvable_strings() {
        let a = running();
        let w = parse_word(&a, "(a,0,1)").unwrap();
        let inf = resolve_infinite(&a, &w).unwrap();
        assert_eq!(inf.kind, WordKind::LeftInfinite);
        assert_eq!(inf.left_period.len(), 3);
        let back = parse_word(&a, &inf.literal(&a)).unwrap();
        assert_eq!(back, inf);
        assert_eq!(inf.letter_at(-1).unwrap().path, a.parse_path("b").unwrap());
        assert_eq!(inf.letter_at(-4).unwrap().i, -4);
        let inv = inf.inverse();
        assert_eq!(inv.kind, WordKind::RightInfinite);
        assert_eq!(inv.canonical_key(&a), inf.canonical_key(&a));
        let w = parse_word(&a, "(a,1,0)").unwrap();
        assert_eq!(resolve_infinite(&a, &w).unwrap().kind, WordKind::RightInfinite);
        let acyclic = crate::quiver::parse_algebra("vertices: 0 1\narrow x: 0 -> 1\n").unwrap();
        let w = parse_word(&acyclic, "(x,0,1)").unwrap();
        assert_eq!(resolve_infinite(&acyclic, &w), Err(Unresolvable::NotResolvable));
    }

    #[test]
    fn primitivity_of_resolution() {
        let a = running();
        // The prefix (c) is a direct antipath after which (b)(a) still resolves.
        let w = parse_word(&a, "(c,-1,0)(b,0,1)(a,1,2)").unwrap();
        assert_eq!(resolve_infinite(&a, &w), Err(Unresolvable::NotPrimitive));
    }

    #[test]
    fn tails_absorb_matching_core_letters() {
        let a = running();
        let w = parse_word(&a, "[(c,-3,-2)(b,-2,-1)(a,-1,0)]^inf (c,0,1)(b,1,2)(a*f,2,3)").unwrap();
        assert_eq!(w.letters.len(), 1);
        assert_eq!(w.literal(&a), "[(a,-1,0)(c,0,1)(b,1,2)]^inf (a*f,2,3)");
    }
}
