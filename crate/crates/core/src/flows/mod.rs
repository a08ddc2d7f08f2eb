//! Frequency vectors of linear flows, written over a formal basis of reals
//! `1, x_1, …, x_m` assumed independent over ℚ, and equivalence of the flows
//! they generate.

mod decide;

pub use decide::{decide_equivalence_2d, EquivalenceVerdict, Obstruction, UndecidedReason};

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{format_rational, parse_rational, MatrixError, Rational, RationalMatrix};
use crate::products::{is_automorphism, ProductError, ProductSolenoid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("basis must start with \"1\" and have distinct labels")]
    BadBasis,
    #[error("frequency vector is zero")]
    ZeroVector,
    #[error("frequency vectors use different bases")]
    BasisMismatch,
    #[error("expected size {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("scale must be nonzero")]
    ZeroScale,
    #[error("no numeric value for basis element {0:?}")]
    MissingValue(String),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Labels of the formal basis; label 0 is always `"1"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct SymbolicBasis {
    labels: Vec<String>,
}

impl TryFrom<Vec<String>> for SymbolicBasis {
    type Error = FlowError;

    fn try_from(labels: Vec<String>) -> Result<Self, FlowError> {
        SymbolicBasis::new(labels)
    }
}

impl From<SymbolicBasis> for Vec<String> {
    fn from(b: SymbolicBasis) -> Self {
        b.labels
    }
}

impl SymbolicBasis {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, FlowError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = labels.clone();
        seen.sort();
        seen.dedup();
        if labels.first().map(String::as_str) != Some("1") || seen.len() != labels.len() {
            return Err(FlowError::BadBasis);
        }
        Ok(SymbolicBasis { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Numeric value of a basis label when it can be read off the name:
/// `1`, decimals, `sqrtN`, `pi`, `e`.
pub fn known_value(label: &str) -> Option<f64> {
    match label {
        "pi" | "π" => return Some(std::f64::consts::PI),
        "e" => return Some(std::f64::consts::E),
        _ => {}
    }
    if let Some(n) = label.strip_prefix("sqrt").or_else(|| label.strip_prefix("√")) {
        return n.parse::<f64>().ok().map(f64::sqrt);
    }
    label.parse::<f64>().ok()
}

/// `ω = (ω_1, …, ω_n)` with `ω_i = Σ_b coords[i][b] · basis[b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector {
    basis: SymbolicBasis,
    coords: RationalMatrix,
    values: BTreeMap<String, f64>,
}

impl FrequencyVector {
    pub fn new(basis: SymbolicBasis, coords: RationalMatrix) -> Result<Self, FlowError> {
        if coords.cols() != basis.len() {
            return Err(FlowError::SizeMismatch {
                expected: basis.len(),
                found: coords.cols(),
            });
        }
        if coords.entries().iter().all(Zero::is_zero) {
            return Err(FlowError::ZeroVector);
        }
        Ok(FrequencyVector {
            basis,
            coords,
            values: BTreeMap::new(),
        })
    }

    /// Coordinates over the basis `1` only.
    pub fn rational(entries: &[Rational]) -> Result<Self, FlowError> {
        let rows = entries.iter().map(|e| vec![e.clone()]).collect();
        Self::new(SymbolicBasis::new(["1"])?, RationalMatrix::from_rows(rows)?)
    }

    /// Numeric values for labels that [`known_value`] cannot read.
    pub fn with_values(mut self, values: BTreeMap<String, f64>) -> Self {
        self.values = values;
        self
    }

    pub fn basis(&self) -> &SymbolicBasis {
        &self.basis
    }

    pub fn coords(&self) -> &RationalMatrix {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.rows()
    }

    pub fn values(&self) -> &BTreeMap<String, f64> {
        &self.values
    }

    pub fn basis_values(&self) -> Result<Vec<f64>, FlowError> {
        self.basis
            .labels()
            .iter()
            .map(|l| {
                self.values
                    .get(l)
                    .copied()
                    .or_else(|| known_value(l))
                    .ok_or_else(|| FlowError::MissingValue(l.clone()))
            })
            .collect()
    }

    /// `ω_i` as floats.
    pub fn evaluate(&self) -> Result<Vec<f64>, FlowError> {
        let vals = self.basis_values()?;
        Ok((0..self.dim())
            .map(|i| {
                self.coords
                    .row(i)
                    .iter()
                    .zip(&vals)
                    .map(|(c, v)| c.to_f64().unwrap_or(f64::NAN) * v)
                    .sum()
            })
            .collect())
    }

    /// `ω_i` exactly, when every coordinate is a rational number.
    pub fn as_rationals(&self) -> Option<Vec<Rational>> {
        let pure = (0..self.dim()).all(|i| self.coords.row(i)[1..].iter().all(Zero::is_zero));
        pure.then(|| (0..self.dim()).map(|i| self.coords.get(i, 0).clone()).collect())
    }

    fn same_basis(&self, other: &FrequencyVector) -> Result<(), FlowError> {
        if self.basis != other.basis {
            return Err(FlowError::BasisMismatch);
        }
        if self.dim() != other.dim() {
            return Err(FlowError::SizeMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrequency {
    basis: SymbolicBasis,
    coords: RationalMatrix,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    values: BTreeMap<String, f64>,
}

impl Serialize for FrequencyVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawFrequency {
            basis: self.basis.clone(),
            coords: self.coords.clone(),
            values: self.values.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrequencyVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawFrequency::deserialize(d)?;
        Ok(FrequencyVector::new(raw.basis, raw.coords)
            .map_err(D::Error::custom)?
            .with_values(raw.values))
    }
}

/// Whether `ω_1, …, ω_n` are independent over ℚ; otherwise a primitive
/// integer relation `k` with `Σ k_i ω_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrationalityVerdict {
    pub irrational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<Vec<i64>>,
}

fn primitive_integer(v: &[Rational]) -> Vec<num_bigint::BigInt> {
    use num_integer::Integer;
    let l = v.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    let mut out: Vec<_> = ints.into_iter().map(|x| x / &g).collect();
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        out.iter_mut().for_each(|x| *x = -x.clone());
    }
    out
}

pub fn is_irrational(w: &FrequencyVector) -> IrrationalityVerdict {
    let (_, kernel) = w.coords.transpose().kernel_rank();
    match kernel.first() {
        None => IrrationalityVerdict {
            irrational: true,
            relation: None,
        },
        Some(k) => IrrationalityVerdict {
            irrational: false,
            relation: Some(
                primitive_integer(k)
                    .iter()
                    .map(|x| x.to_i64().unwrap_or(i64::MAX))
                    .collect(),
            ),
        },
    }
}

/// Rank over ℚ of the group generated by `ω_1, …, ω_n`.
pub fn rank(w: &FrequencyVector) -> usize {
    w.coords.rank()
}

/// `ω' = (1/a) H ω`.
pub fn transform_frequency(
    h: &RationalMatrix,
    a: &Rational,
    w: &FrequencyVector,
) -> Result<FrequencyVector, FlowError> {
    if a.is_zero() {
        return Err(FlowError::ZeroScale);
    }
    if h.rows() != w.dim() || h.cols() != w.dim() {
        return Err(FlowError::SizeMismatch {
            expected: w.dim(),
            found: h.rows(),
        });
    }
    let coords = h.mul(&w.coords)?.scale(&(Rational::one() / a));
    Ok(FrequencyVector {
        basis: w.basis.clone(),
        coords,
        values: w.values.clone(),
    })
}

/// Checks a certificate: `A` is an automorphism of the product and
/// `a·ω' = A·ω` holds exactly.
pub fn verify_equivalence(
    a_mat: &RationalMatrix,
    a: &Rational,
    p: &ProductSolenoid,
    w: &FrequencyVector,
    w2: &FrequencyVector,
) -> Result<bool, FlowError> {
    w.same_basis(w2)?;
    if w.dim() != p.dim() {
        return Err(FlowError::SizeMismatch {
            expected: p.dim(),
            found: w.dim(),
        });
    }
    if a.is_zero() || !is_automorphism(a_mat, p)?.is_automorphism {
        return Ok(false);
    }
    Ok(a_mat.mul(&w.coords)? == w2.coords.scale(a))
}

/// Parses `["1","0"]`-style rows into a rational matrix.
pub fn parse_rows(rows: &[&[&str]]) -> Result<RationalMatrix, FlowError> {
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_rational(s).map_err(|_| FlowError::BadBasis))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RationalMatrix::from_rows(rows)?)
}

impl std::fmt::Display for FrequencyVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = (0..self.dim())
            .map(|i| {
                let terms: Vec<String> = self
                    .coords
                    .row(i)
                    .iter()
                    .zip(self.basis.labels())
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, l)| {
                        if l == "1" {
                            format_rational(c)
                        } else if c.is_one() {
                            l.clone()
                        } else {
                            format!("{}*{l}", format_rational(c))
                        }
                    })
                    .collect();
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{integer, rational};
    use crate::supernatural::{Exponent, SupernaturalNumber};

    fn w(labels: &[&str], rows: &[&[&str]]) -> FrequencyVector {
        FrequencyVector::new(SymbolicBasis::new(labels.iter().copied()).unwrap(), parse_rows(rows).unwrap()).unwrap()
    }

    fn dyadic2() -> ProductSolenoid {
        let d = SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap();
        ProductSolenoid::new(vec![d.clone(), d]).unwrap()
    }

    #[test]
    fn irrationality_examples() {
        let a = w(&["1", "sqrt2"], &[&["1", "0"], &["0", "1"]]);
        assert!(is_irrational(&a).irrational);
        assert_eq!(rank(&a), 2);
        let b = FrequencyVector::rational(&[integer(2), integer(4)]).unwrap();
        let v = is_irrational(&b);
        assert!(!v.irrational);
        assert_eq!(v.relation, Some(vec![2, -1]));
        assert_eq!(rank(&b), 1);
        let c = w(&["1", "sqrt2"], &[&["1", "0"], &["0", "1"], &["1", "1"]]);
        assert_eq!(is_irrational(&c).relation, Some(vec![1, 1, -1]));
        assert_eq!(rank(&c), 2);
    }

    #[test]
    fn transform_examples() {
        let a = w(&["1", "sqrt2"], &[&["1", "0"], &["0", "1"]]);
        let id = RationalMatrix::identity(2);
        assert_eq!(transform_frequency(&id, &integer(1), &a).unwrap(), a);
        let swap = parse_rows(&[&["0", "1"], &["1", "0"]]).unwrap();
        let s = transform_frequency(&swap, &integer(1), &a).unwrap();
        assert_eq!(s.coords(), &parse_rows(&[&["0", "1"], &["1", "0"]]).unwrap());
        let shear = parse_rows(&[&["1", "1"], &["0", "1"]]).unwrap();
        let t = transform_frequency(&shear, &integer(2), &a).unwrap();
        assert_eq!(t.coords(), &parse_rows(&[&["1/2", "1/2"], &["0", "1/2"]]).unwrap());
        assert_eq!(transform_frequency(&id, &integer(0), &a), Err(FlowError::ZeroScale));
    }

    #[test]
    fn verification_examples() {
        let p = dyadic2();
        let a = w(&["1", "sqrt2"], &[&["1", "0"], &["0", "1"]]);
        let id = RationalMatrix::identity(2);
        assert!(verify_equivalence(&id, &integer(1), &p, &a, &a).unwrap());
        let swap = parse_rows(&[&["0", "1"], &["1", "0"]]).unwrap();
        let b = w(&["1", "sqrt2"], &[&["0", "1"], &["1", "0"]]);
        assert!(verify_equivalence(&swap, &integer(1), &p, &a, &b).unwrap());
        let third = parse_rows(&[&["1/3", "0"], &["0", "1"]]).unwrap();
        let c = transform_frequency(&third, &integer(1), &a).unwrap();
        assert!(!verify_equivalence(&third, &integer(1), &p, &a, &c).unwrap());
        let other = w(&["1", "sqrt3"], &[&["1", "0"], &["0", "1"]]);
        assert_eq!(
            verify_equivalence(&id, &rational(1, 1), &p, &a, &other),
            Err(FlowError::BasisMismatch)
        );
    }

    #[test]
    fn values_and_json() {
        let a: FrequencyVector =
            serde_json::from_str(r#"{"basis":["1","sqrt2"],"coords":[["1","0"],["0","1"]]}"#).unwrap();
        let v = a.evaluate().unwrap();
        assert!((v[1] - 2f64.sqrt()).abs() < 1e-15);
        let b: FrequencyVector =
            serde_json::from_str(r#"{"basis":["1","x"],"coords":[["0","1"]],"values":{"x":0.25}}"#).unwrap();
        assert_eq!(b.evaluate().unwrap(), vec![0.25]);
        let c: FrequencyVector = serde_json::from_str(r#"{"basis":["1","y"],"coords":[["0","1"]]}"#).unwrap();
        assert_eq!(c.evaluate(), Err(FlowError::MissingValue("y".into())));
        assert!(serde_json::from_str::<FrequencyVector>(r#"{"basis":["x"],"coords":[["1"]]}"#).is_err());
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<FrequencyVector>(&text).unwrap(), a);
    }
}
