//! Ground truth for morphism spaces in the homotopy category: exact linear
//! algebra on explicit complexes, independent of the string combinatorics.

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::{build_complex, ComplexError, GradedMap, ProjComplex};
use crate::field::{rank, Field, FieldChoice, FieldError, PrimeField, RationalField, Scalar};
use crate::quiver::{GentleAlgebra, Path};
use crate::words::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("the oracle does not handle truncated infinite complexes")]
    InfiniteComplex,
    #[error("both words are infinite; no exact finite model exists")]
    BothInfinite,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Coordinates of graded maps C -> D of a fixed degree: one per
/// `(degree, source slot, target slot, path)`.
#[derive(Debug, Clone)]
pub struct FlatMapSpace {
    pub shift: i32,
    pub coords: Vec<(i32, usize, usize, Path)>,
    index: HashMap<(i32, usize, usize, Path), usize>,
}

impl FlatMapSpace {
    pub fn new(alg: &GentleAlgebra, c: &ProjComplex, d: &ProjComplex, shift: i32) -> Self {
        let mut coords = Vec::new();
        for (&i, srcs) in &c.modules {
            let Some(tgts) = d.modules.get(&(i + shift)) else { continue };
            for (a, &x) in srcs.iter().enumerate() {
                for (b, &y) in tgts.iter().enumerate() {
                    for p in alg.paths_between(y, x) {
                        coords.push((i, a, b, p));
                    }
                }
            }
        }
        let index = coords.iter().cloned().enumerate().map(|(k, c)| (c, k)).collect();
        FlatMapSpace { shift, coords, index }
    }
    pub fn dim(&self) -> usize {
        self.coords.len()
    }
    pub fn index_of(&self, key: &(i32, usize, usize, Path)) -> Option<usize> {
        self.index.get(key).copied()
    }
    /// Coordinate vector of a graded map of this degree.
    pub fn vector<F: Field>(&self, field: &F, m: &GradedMap) -> Result<Vec<F::Elem>, FieldError> {
        let mut v = vec![field.zero(); self.dim()];
        for (key, s) in m.coefficients() {
            let k = self.index_of(&key).expect("component outside the map space");
            v[k] = field.add(&v[k], &field.embed(&s)?);
        }
        Ok(v)
    }
}

/// A single coordinate as a graded map.
fn basis_map(space: &FlatMapSpace, k: usize) -> GradedMap {
    let (i, a, b, p) = space.coords[k].clone();
    let mut m = GradedMap::new(space.shift);
    m.push(i, crate::complex::Entry { row: a, col: b, scalar: Scalar::from_integer(1.into()), path: p });
    m
}

/// `d_C f - f d_D` for a graded map f of degree 0.
pub fn chain_defect(alg: &GentleAlgebra, c: &ProjComplex, d: &ProjComplex, f: &GradedMap) -> GradedMap {
    let left = c.differential.then(alg, f);
    let right = f.then(alg, &d.differential);
    left.add_scaled(&right, &Scalar::from_integer((-1).into()))
}

/// `d_C h + h d_D` for a graded map h of degree -1.
pub fn boundary(alg: &GentleAlgebra, c: &ProjComplex, d: &ProjComplex, h: &GradedMap) -> GradedMap {
    let left = c.differential.then(alg, h);
    let right = h.then(alg, &d.differential);
    left.add_scaled(&right, &Scalar::from_integer(1.into()))
}

fn refuse(c: &ProjComplex, d: &ProjComplex) -> Result<(), OracleError> {
    if c.truncated || d.truncated {
        Err(OracleError::InfiniteComplex)
    } else {
        Ok(())
    }
}

/// Dimensions computed over one field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomDims {
    pub chain_maps: usize,
    pub null_homotopic: usize,
}

impl HomDims {
    pub fn hom(&self) -> usize {
        self.chain_maps - self.null_homotopic
    }
}

fn dims_over<F: Field>(field: &F, alg: &GentleAlgebra, c: &ProjComplex, d: &ProjComplex) -> Result<HomDims, OracleError> {
    let maps = FlatMapSpace::new(alg, c, d, 0);
    let defects = FlatMapSpace::new(alg, c, d, 1);
    let homs = FlatMapSpace::new(alg, c, d, -1);
    let mut rows = Vec::with_capacity(maps.dim());
    for k in 0..maps.dim() {
        rows.push(defects.vector(field, &chain_defect(alg, c, d, &basis_map(&maps, k)))?);
    }
    let constraint_rank = if defects.dim() == 0 { 0 } else { rank(field, rows) };
    let mut rows = Vec::with_capacity(homs.dim());
    for k in 0..homs.dim() {
        rows.push(maps.vector(field, &boundary(alg, c, d, &basis_map(&homs, k)))?);
    }
    let null = if maps.dim() == 0 { 0 } else { rank(field, rows) };
    Ok(HomDims { chain_maps: maps.dim() - constraint_rank, null_homotopic: null })
}

/// Chain-map and null-homotopic dimensions for a pair of bounded complexes.
pub fn hom_dims(alg: &GentleAlgebra, c: &ProjComplex, d: &ProjComplex, field: FieldChoice) -> Result<HomDims, OracleError> {
    refuse(c, d)?;
    match field {
        FieldChoice::Prime(p) => dims_over(&PrimeField::new(p)?, alg, c, d),
        FieldChoice::Rational => dims_over(&RationalField, alg, c, d),
    }
}

pub fn chain_map_dim(alg: &GentleAlgebra, c: &ProjComplex, d: &ProjComplex, field: FieldChoice) -> Result<usize, OracleError> {
    Ok(hom_dims(alg, c, d, field)?.chain_maps)
}

pub fn null_homotopic_dim(alg: &GentleAlgebra, c: &ProjComplex, d: &ProjComplex, field: FieldChoice) -> Result<usize, OracleError> {
    Ok(hom_dims(alg, c, d, field)?.null_homotopic)
}

/// Dimension of the morphism space in the homotopy category.
pub fn oracle_hom_dim(alg: &GentleAlgebra, c: &ProjComplex, d: &ProjComplex, field: FieldChoice) -> Result<usize, OracleError> {
    Ok(hom_dims(alg, c, d, field)?.hom())
}

/// Morphism dimension between two words. A pair with one infinite word is
/// reduced exactly to bounded complexes: maps and homotopies between a
/// complex bounded below at degree L and one bounded above only involve
/// the other complex in degrees at least L - 1.
pub fn oracle_hom_dim_words(alg: &GentleAlgebra, v: &Word, w: &Word, field: FieldChoice) -> Result<usize, OracleError> {
    let (cv, cw) = match (v.is_finite(), w.is_finite()) {
        (true, true) => (build_complex(alg, v, None)?, build_complex(alg, w, None)?),
        (false, false) => return Err(OracleError::BothInfinite),
        (true, false) => {
            let cv = build_complex(alg, v, None)?;
            let cut = cv.min_degree().unwrap() - 1;
            let mut cw = build_complex(alg, w, Some(cut))?;
            cw.truncated = false;
            (cv, cw)
        }
        (false, true) => {
            let cw = build_complex(alg, w, None)?;
            let cut = cw.min_degree().unwrap() - 1;
            let mut cv = build_complex(alg, v, Some(cut))?;
            cv.truncated = false;
            (cv, cw)
        }
    };
    oracle_hom_dim(alg, &cv, &cw, field)
}

/// Exact check that f commutes with the differentials.
pub fn verify_chain_map(alg: &GentleAlgebra, c: &ProjComplex, d: &ProjComplex, f: &GradedMap) -> bool {
    f.shift == 0 && chain_defect(alg, c, d, f).is_zero()
}

/// Exact check that `f - g = d h + h d`.
pub fn verify_homotopy(alg: &GentleAlgebra, c: &ProjComplex, d: &ProjComplex, f: &GradedMap, g: &GradedMap, h: &GradedMap) -> bool {
    let diff = f.add_scaled(g, &Scalar::from_integer((-1).into()));
    diff.add_scaled(&boundary(alg, c, d, h), &Scalar::from_integer((-1).into())).is_zero()
}

fn span_rank<F: Field>(
    field: &F,
    alg: &GentleAlgebra,
    c: &ProjComplex,
    d: &ProjComplex,
    maps: &[&GradedMap],
) -> Result<usize, OracleError> {
    let space = FlatMapSpace::new(alg, c, d, 0);
    let homs = FlatMapSpace::new(alg, c, d, -1);
    let mut rows = Vec::new();
    for k in 0..homs.dim() {
        rows.push(space.vector(field, &boundary(alg, c, d, &basis_map(&homs, k)))?);
    }
    for m in maps {
        rows.push(space.vector(field, m)?);
    }
    if space.dim() == 0 {
        return Ok(0);
    }
    Ok(rank(field, rows))
}

/// True if f lies in the span of `maps` plus the null-homotopic maps.
pub fn in_span_mod_homotopy(
    alg: &GentleAlgebra,
    c: &ProjComplex,
    d: &ProjComplex,
    maps: &[GradedMap],
    f: &GradedMap,
    field: FieldChoice,
) -> Result<bool, OracleError> {
    refuse(c, d)?;
    let base: Vec<&GradedMap> = maps.iter().collect();
    let mut with = base.clone();
    with.push(f);
    let (r0, r1) = match field {
        FieldChoice::Prime(p) => {
            let fp = PrimeField::new(p)?;
            (span_rank(&fp, alg, c, d, &base)?, span_rank(&fp, alg, c, d, &with)?)
        }
        FieldChoice::Rational => (span_rank(&RationalField, alg, c, d, &base)?, span_rank(&RationalField, alg, c, d, &with)?),
    };
    Ok(r0 == r1)
}

/// True if f is null-homotopic.
pub fn is_null_homotopic(
    alg: &GentleAlgebra,
    c: &ProjComplex,
    d: &ProjComplex,
    f: &GradedMap,
    field: FieldChoice,
) -> Result<bool, OracleError> {
    in_span_mod_homotopy(alg, c, d, &[], f, field)
}

/// True if f and g are homotopic.
pub fn homotopic(
    alg: &GentleAlgebra,
    c: &ProjComplex,
    d: &ProjComplex,
    f: &GradedMap,
    g: &GradedMap,
    field: FieldChoice,
) -> Result<bool, OracleError> {
    let diff = f.add_scaled(g, &Scalar::from_integer((-1).into()));
    is_null_homotopic(alg, c, d, &diff, field)
}

/// Rank of a family of chain maps modulo null-homotopic maps.
pub fn rank_mod_homotopy(
    alg: &GentleAlgebra,
    c: &ProjComplex,
    d: &ProjComplex,
    maps: &[GradedMap],
    field: FieldChoice,
) -> Result<usize, OracleError> {
    refuse(c, d)?;
    let refs: Vec<&GradedMap> = maps.iter().collect();
    let (r0, r1) = match field {
        FieldChoice::Prime(p) => {
            let fp = PrimeField::new(p)?;
            (span_rank(&fp, alg, c, d, &[])?, span_rank(&fp, alg, c, d, &refs)?)
        }
        FieldChoice::Rational => (span_rank(&RationalField, alg, c, d, &[])?, span_rank(&RationalField, alg, c, d, &refs)?),
    };
    Ok(r1 - r0)
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::field::scalar;
    use crate::words::parse_word;
    use crate::words::tests::{running, W23};

    fn cx(a: &GentleAlgebra, lit: &str) -> ProjComplex {
        build_complex(a, &parse_word(a, lit).unwrap(), None).unwrap()
    }

    #[test]
    fn stalk_complexes() {
        let a = running();
        let p3 = cx(&a, "(1_3,0,0)");
        let p1 = cx(&a, "(1_1,0,0)");
        let f = FieldChoice::default();
        // The only nonzero path from 3 to 1 is a*f.
        assert_eq!(chain_map_dim(&a, &p1, &p3, f).unwrap(), 1);
        assert_eq!(null_homotopic_dim(&a, &p1, &p3, f).unwrap(), 0);
        assert_eq!(oracle_hom_dim(&a, &p3, &p1, f).unwrap(), 0);
        let p2 = cx(&a, "(1_2,0,0)");
        let p4 = cx(&a, "(1_4,0,0)");
        assert_eq!(chain_map_dim(&a, &p2, &p4, f).unwrap(), 0);
    }

    #[test]
    fn identity_is_a_chain_map() {
        let a = running();
        let c = cx(&a, W23);
        assert!(verify_chain_map(&a, &c, &c, &c.identity()));
        assert!(oracle_hom_dim(&a, &c, &c, FieldChoice::default()).unwrap() >= 1);
        assert!(!is_null_homotopic(&a, &c, &c, &c.identity(), FieldChoice::default()).unwrap());
    }

    #[test]
    fn sign_flipped_differential_breaks_identity() {
        let a = running();
        let c = cx(&a, W23);
        let mut d = c.clone();
        d.differential.blocks.get_mut(&1).unwrap()[0].scalar = scalar(-1);
        assert!(!verify_chain_map(&a, &c, &d, &c.identity()));
    }

    #[test]
    fn fields_agree_on_band() {
        let a = running();
        let z = cx(&a, crate::words::tests::Z);
        let p = oracle_hom_dim(&a, &z, &z, FieldChoice::default()).unwrap();
        let q = oracle_hom_dim(&a, &z, &z, FieldChoice::Rational).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn refuses_infinite() {
        let a = running();
        let w = crate::words::resolve_infinite(&a, &parse_word(&a, "(a,0,1)").unwrap()).unwrap();
        let c = build_complex(&a, &w, Some(-3)).unwrap();
        assert_eq!(oracle_hom_dim(&a, &c, &c, FieldChoice::default()), Err(OracleError::InfiniteComplex));
        assert_eq!(oracle_hom_dim_words(&a, &w, &w, FieldChoice::default()), Err(OracleError::BothInfinite));
        let p = parse_word(&a, "(1_1,0,0)").unwrap();
        assert!(oracle_hom_dim_words(&a, &w, &p, FieldChoice::default()).is_ok());
    }

    #[test]
    fn boundaries_are_null_homotopic() {
        let a = running();
        let c = cx(&a, W23);
        let homs = FlatMapSpace::new(&a, &c, &c, -1);
        assert!(homs.dim() > 0);
        for k in 0..homs.dim() {
            let h = basis_map(&homs, k);
            let f = boundary(&a, &c, &c, &h);
            assert!(verify_chain_map(&a, &c, &c, &f));
            assert!(verify_homotopy(&a, &c, &c, &f, &GradedMap::new(0), &h));
            assert!(is_null_homotopic(&a, &c, &c, &f, FieldChoice::default()).unwrap());
        }
    }
}
