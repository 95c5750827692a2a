//! Exact scalar fields: a prime field GF(p) and the rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Scalars carried by words and complexes.
pub type Scalar = BigRational;

pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
    #[error("denominator of {0} vanishes in GF({1})")]
    FieldTooSmall(String, u64),
    #[error("cannot parse scalar `{0}`")]
    BadScalar(String),
    #[error("unknown field `{0}` (expected gfp:P or rational)")]
    BadField(String),
}

/// Which field the oracle works over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldChoice {
    Prime(u64),
    Rational,
}

impl Default for FieldChoice {
    fn default() -> Self {
        FieldChoice::Prime(DEFAULT_PRIME)
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Prime(p) => write!(f, "gfp:{p}"),
            FieldChoice::Rational => write!(f, "rational"),
        }
    }
}

impl FromStr for FieldChoice {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, FieldError> {
        if s == "rational" {
            return Ok(FieldChoice::Rational);
        }
        let p = s.strip_prefix("gfp:").and_then(|x| x.parse::<u64>().ok()).ok_or_else(|| FieldError::BadField(s.to_string()))?;
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldChoice::Prime(p))
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact field arithmetic used by the linear-algebra oracle.
pub trait Field: Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, x: &Self::Elem) -> Self::Elem;
    fn embed(&self, s: &Scalar) -> Result<Self::Elem, FieldError>;
}

/// The prime field GF(p) for p below 2^32.
#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) || p >= (1 << 32) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }
    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }
    fn reduce(&self, x: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        x.mod_floor(&p).to_u64().expect("residue fits")
    }
}

impl Field for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        (x + y) % self.p
    }
    fn sub(&self, x: &u64, y: &u64) -> u64 {
        (x + self.p - y) % self.p
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        x * y % self.p
    }
    fn neg(&self, x: &u64) -> u64 {
        (self.p - x) % self.p
    }
    fn inv(&self, x: &u64) -> u64 {
        assert!(*x != 0, "inverse of zero");
        self.pow(*x, self.p - 2)
    }
    fn embed(&self, s: &Scalar) -> Result<u64, FieldError> {
        let n = self.reduce(s.numer());
        let d = self.reduce(s.denom());
        if d == 0 {
            return Err(FieldError::FieldTooSmall(s.to_string(), self.p));
        }
        Ok(self.mul(&n, &self.inv(&d)))
    }
}

/// The rational numbers with arbitrary precision.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }
    fn sub(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x - y
    }
    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }
    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }
    fn inv(&self, x: &BigRational) -> BigRational {
        x.recip()
    }
    fn embed(&self, s: &Scalar) -> Result<BigRational, FieldError> {
        Ok(s.clone())
    }
}

/// Rank of a dense matrix by Gaussian elimination with first-nonzero pivoting.
pub fn rank<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !field.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = field.inv(&rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || field.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(pivot_row.iter()).skip(col) {
                if !field.is_zero(p) {
                    *x = field.sub(x, &field.mul(&factor, p));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Parse a scalar written as an integer or a fraction `p/q`.
pub fn parse_scalar(s: &str) -> Result<Scalar, FieldError> {
    let s = s.trim();
    let bad = || FieldError::BadScalar(s.to_string());
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?),
    };
    Ok(r)
}

/// Render a scalar as `n` or `n/d`.
pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_negative(s: &Scalar) -> bool {
    s.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), 5);
        assert_eq!(f.embed(&parse_scalar("1/2").unwrap()).unwrap(), 4);
        assert_eq!(f.embed(&scalar(-1)).unwrap(), 6);
        assert!(f.embed(&parse_scalar("1/7").unwrap()).is_err());
        assert!(PrimeField::new(8).is_err());
    }

    #[test]
    fn ranks_agree() {
        let m = [vec![1i64, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let mp = m.iter().map(|r| r.iter().map(|&x| f.embed(&scalar(x)).unwrap()).collect()).collect();
        let mq = m.iter().map(|r| r.iter().map(|&x| scalar(x)).collect()).collect();
        assert_eq!(rank(&f, mp), 2);
        assert_eq!(rank(&RationalField, mq), 2);
    }

    #[test]
    fn field_choice_parsing() {
        assert_eq!("gfp:32003".parse::<FieldChoice>().unwrap(), FieldChoice::Prime(32003));
        assert_eq!("rational".parse::<FieldChoice>().unwrap(), FieldChoice::Rational);
        assert!("gfp:10".parse::<FieldChoice>().is_err());
        assert!("real".parse::<FieldChoice>().is_err());
    }

    #[test]
    fn scalar_round_trip() {
        for s in ["2", "-3", "1/2", "-7/3"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
        assert!(parse_scalar("1/0").is_err());
    }
}
