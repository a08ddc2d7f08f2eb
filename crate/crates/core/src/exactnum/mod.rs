//! Exact arithmetic: rationals, integer and rational matrices, Smith normal
//! form and the prime utilities the rest of the crate leans on.
//!
//! Nothing in here touches floating point.

mod matrix;
pub mod primes;
mod snf;

pub use matrix::{IntMatrix, Matrix, RationalMatrix};
pub use snf::{covering_degree, snf, SnfDecomposition};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("rows have different lengths")]
    Ragged,
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("cannot multiply {left:?} by {right:?}")]
    Dimension {
        left: (usize, usize),
        right: (usize, usize),
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"c/d"` or `"c"` (surrounding whitespace allowed, `d != 0`).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// `"c"` for integers, `"c/d"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(n.into(), d.into())
}

pub fn integer(n: i64) -> Rational {
    BigRational::from_integer(n.into())
}

/// Exponent of the prime `p` in the integer `n != 0`.
pub fn valuation(n: &BigInt, p: u64) -> u64 {
    let mut n = n.abs();
    let p = BigInt::from(p);
    let mut v = 0;
    if n.is_zero() {
        return 0;
    }
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation of a nonzero rational.
pub fn rational_valuation(r: &Rational, p: u64) -> i64 {
    valuation(r.numer(), p) as i64 - valuation(r.denom(), p) as i64
}

/// Distinct prime factors of a nonzero integer. Values beyond `u64` are
/// factored by trial division on the small part followed by Pollard rho on
/// the `u64` remainder; larger cofactors are rejected with `None`.
pub fn prime_support(n: &BigInt) -> Option<Vec<u64>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while u64::try_from(&n).is_err() && p < 1_000_000 {
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += 1;
    }
    let rest = u64::try_from(&n).ok()?;
    for (q, _) in primes::factor_exponents(rest) {
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out.sort_unstable();
    Some(out)
}

/// Serde adapter writing a rational as `"c/d"` and reading strings or integers.
pub mod rational_string {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(super::integer(n)),
            Repr::Str(s) => parse_rational(&s).map_err(D::Error::custom),
        }
    }
}

/// Serde adapter writing an integer as a JSON number when it fits in an
/// `i64` and as a decimal string otherwise.
pub mod int_json {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(i64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(n) {
            Ok(v) => Repr::Num(v),
            Err(_) => Repr::Str(n.to_string()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v.into()),
            Repr::Str(s) => s.trim().parse().map_err(D::Error::custom),
        }
    }
}
