//! Closed-form morphism dimensions involving band complexes of any
//! dimension, reduced to one-dimensional computations.

use serde::Serialize;
use thiserror::Error;

use crate::field::Scalar;
use crate::hom::{hom_dim, HomError};
use crate::quiver::GentleAlgebra;
use crate::words::{Word, WordKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BandError {
    #[error("expected a band word")]
    NotBand,
    #[error("expected a string word")]
    NotString,
    #[error("band dimension must be positive")]
    ZeroDimension,
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// A band word with scalar and dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandSpec {
    pub word: Word,
    pub lambda: Scalar,
    pub r: usize,
}

impl BandSpec {
    pub fn new(word: &Word, lambda: Scalar, r: usize) -> Result<Self, BandError> {
        if word.kind != WordKind::Band {
            return Err(BandError::NotBand);
        }
        if r == 0 {
            return Err(BandError::ZeroDimension);
        }
        Ok(BandSpec { word: word.clone(), lambda, r })
    }

    /// Read the scalar and dimension off a band word.
    pub fn from_word(word: &Word) -> Result<Self, BandError> {
        Self::new(word, word.lambda.clone(), word.dim)
    }

    /// The one-dimensional band with the same word and scalar.
    pub fn base(&self) -> Word {
        self.word.with_band_data(self.lambda.clone(), 1)
    }

    /// The band word carrying this scalar and dimension.
    pub fn full(&self) -> Word {
        self.word.with_band_data(self.lambda.clone(), self.r)
    }

    /// Apply the suspension `k` times.
    pub fn shift(&self, k: i32) -> BandSpec {
        BandSpec { word: self.word.shift(k), lambda: self.lambda.clone(), r: self.r }
    }
}

/// Which formula produced a band-band dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum BandRegime {
    /// The source is not a suspension of the target.
    Generic,
    /// The target is the suspension of the source.
    ShiftedSelf,
}

/// Dimension with the regime used and the one-dimensional ingredients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandDim {
    pub dim: usize,
    pub regime: BandRegime,
    pub base_dim: usize,
    pub delta: usize,
}

fn isomorphic(alg: &GentleAlgebra, x: &Word, y: &Word) -> bool {
    x.canonical_key(alg) == y.canonical_key(alg)
}

/// Dimension of morphisms between two band complexes of any dimensions.
pub fn band_band(alg: &GentleAlgebra, x: &BandSpec, y: &BandSpec) -> Result<BandDim, BandError> {
    let (bx, by) = (x.base(), y.base());
    let base_dim = hom_dim(alg, &bx, &by)?;
    let (r, s) = (x.r, y.r);
    if isomorphic(alg, &by, &bx.shift(1)) && base_dim > 0 {
        // Only the class coming from the suspended identity fails to lift
        // freely; it contributes min(r, s).
        let dim = r.min(s) + r * s * (base_dim - 1);
        return Ok(BandDim { dim, regime: BandRegime::ShiftedSelf, base_dim, delta: 0 });
    }
    let delta = usize::from(isomorphic(alg, &bx, &by));
    let rad = base_dim - delta;
    Ok(BandDim { dim: r.min(s) * delta + r * s * rad, regime: BandRegime::Generic, base_dim, delta })
}

/// Dimension of morphisms between two band complexes of any dimensions.
pub fn band_band_dim(alg: &GentleAlgebra, x: &BandSpec, y: &BandSpec) -> Result<usize, BandError> {
    Ok(band_band(alg, x, y)?.dim)
}

/// Direction of a band-string morphism space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// From the band complex to the string complex.
    To,
    /// From the string complex to the band complex.
    From,
}

/// Dimension of morphisms between a band complex and a string complex.
pub fn band_string_dim(alg: &GentleAlgebra, x: &BandSpec, u: &Word, direction: Direction) -> Result<usize, BandError> {
    if u.kind == WordKind::Band {
        return Err(BandError::NotString);
    }
    let b = x.base();
    let d = match direction {
        Direction::To => hom_dim(alg, &b, u)?,
        Direction::From => hom_dim(alg, u, &b)?,
    };
    Ok(x.r * d)
}

/// True if the one-dimensional band has nonzero morphisms to its `k`-fold
/// suspension.
pub fn self_ext_positive(alg: &GentleAlgebra, x: &BandSpec, k: i32) -> Result<bool, BandError> {
    let b = x.base();
    Ok(hom_dim(alg, &b, &b.shift(k))? > 0)
}

/// Dimension grid for `r` in `rs` and `s` in `ss` between two band words.
pub fn band_grid(
    alg: &GentleAlgebra,
    x: &BandSpec,
    y: &BandSpec,
    rs: &[usize],
    ss: &[usize],
) -> Result<Vec<(usize, usize, usize)>, BandError> {
    let mut out = Vec::new();
    for &r in rs {
        for &s in ss {
            let a = BandSpec { r, ..x.clone() };
            let b = BandSpec { r: s, ..y.clone() };
            out.push((r, s, band_band_dim(alg, &a, &b)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::field::{scalar, FieldChoice};
    use crate::oracle::oracle_hom_dim;
    use crate::words::parse_word;
    use crate::words::tests::{running, W23, Z};

    fn oracle(alg: &GentleAlgebra, x: &Word, y: &Word) -> usize {
        let (cx, cy) = (build_complex(alg, x, None).unwrap(), build_complex(alg, y, None).unwrap());
        oracle_hom_dim(alg, &cx, &cy, FieldChoice::default()).unwrap()
    }

    #[test]
    fn small_grid_matches_oracle() {
        let alg = running();
        let z = parse_word(&alg, Z).unwrap();
        for (lam, mu) in [(1, 1), (1, 2)] {
            for k in [-1, 0, 1] {
                for (r, s) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                    let x = BandSpec::new(&z, scalar(lam), r).unwrap();
                    let y = BandSpec::new(&z, scalar(mu), s).unwrap().shift(k);
                    let got = band_band_dim(&alg, &x, &y).unwrap();
                    assert_eq!(got, oracle(&alg, &x.full(), &y.full()), "lam={lam} mu={mu} k={k} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn shifted_self_regime_is_detected() {
        let alg = running();
        let z = parse_word(&alg, Z).unwrap();
        let x = BandSpec::new(&z, scalar(1), 2).unwrap();
        let d = band_band(&alg, &x, &x.shift(1)).unwrap();
        assert_eq!(d.regime, BandRegime::ShiftedSelf);
        let d = band_band(&alg, &x, &x).unwrap();
        assert_eq!((d.regime, d.delta), (BandRegime::Generic, 1));
    }

    #[test]
    fn band_string_scales_with_dimension() {
        let alg = running();
        let z = parse_word(&alg, Z).unwrap();
        let u = parse_word(&alg, W23).unwrap();
        for dir in [Direction::To, Direction::From] {
            let one = band_string_dim(&alg, &BandSpec::new(&z, scalar(1), 1).unwrap(), &u, dir).unwrap();
            let x = BandSpec::new(&z, scalar(1), 2).unwrap();
            let two = band_string_dim(&alg, &x, &u, dir).unwrap();
            assert_eq!(two, 2 * one);
            let want = match dir {
                Direction::To => oracle(&alg, &x.full(), &u),
                Direction::From => oracle(&alg, &u, &x.full()),
            };
            assert_eq!(two, want);
        }
    }

    #[test]
    fn third_self_extension_is_nonzero() {
        let alg = running();
        let z = parse_word(&alg, Z).unwrap();
        let x = BandSpec::new(&z, scalar(1), 1).unwrap();
        assert!(self_ext_positive(&alg, &x, 3).unwrap());
        assert!(self_ext_positive(&alg, &x, 0).unwrap());
    }

    #[test]
    fn rejects_strings_and_zero_dimension() {
        let alg = running();
        let u = parse_word(&alg, W23).unwrap();
        assert_eq!(BandSpec::new(&u, scalar(1), 1), Err(BandError::NotBand));
        let z = parse_word(&alg, Z).unwrap();
        assert_eq!(BandSpec::new(&z, scalar(1), 0), Err(BandError::ZeroDimension));
    }
}
