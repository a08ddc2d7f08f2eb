//! Finite products of 1-solenoids, seen as `n`-solenoids with diagonal
//! bonding matrices, and their automorphisms.

mod isometry;

pub use isometry::{product_isometry_check, sample_pair, IsometryReport};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{IntMatrix, MatrixError, RationalMatrix};
use crate::multipliers::{is_proper_multiplier, MultiplierVerdict};
use crate::supernatural::{
    compare, is_properly_arranged, proper_arrangement, slot_terms, Descriptor, OrderRelation,
    PrimeSequenceSpec, SupernaturalNumber,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("a product needs at least one coordinate")]
    Empty,
    #[error("sequence specs are needed to materialize bonding maps")]
    MissingSpecs,
    #[error("expected size {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("coordinates are not properly arranged")]
    NotProperlyArranged,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `Σ_{P_1} × ⋯ × Σ_{P_n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSolenoid {
    coordinates: Vec<SupernaturalNumber>,
    specs: Option<Vec<PrimeSequenceSpec>>,
    properly_arranged: bool,
}

impl ProductSolenoid {
    pub fn new(coordinates: Vec<SupernaturalNumber>) -> Result<Self, ProductError> {
        if coordinates.is_empty() {
            return Err(ProductError::Empty);
        }
        let properly_arranged = is_properly_arranged(&coordinates);
        Ok(ProductSolenoid {
            coordinates,
            specs: None,
            properly_arranged,
        })
    }

    pub fn from_specs(specs: Vec<PrimeSequenceSpec>) -> Result<Self, ProductError> {
        let coords = specs.iter().map(SupernaturalNumber::from_spec).collect();
        let mut s = Self::new(coords)?;
        s.specs = Some(specs);
        Ok(s)
    }

    /// Keeps the raw sequences only when every coordinate came with one.
    pub fn from_descriptors(ds: &[Descriptor]) -> Result<Self, ProductError> {
        let specs: Option<Vec<PrimeSequenceSpec>> = ds.iter().map(|d| d.spec().cloned()).collect();
        match specs {
            Some(specs) => Self::from_specs(specs),
            None => Self::new(ds.iter().map(Descriptor::supernatural).collect()),
        }
    }

    /// The same product with its coordinates replaced by their proper
    /// arrangement; sequences are then the canonical slot sequences.
    pub fn arranged(&self) -> Self {
        ProductSolenoid {
            coordinates: proper_arrangement(&self.coordinates),
            specs: None,
            properly_arranged: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[SupernaturalNumber] {
        &self.coordinates
    }

    pub fn specs(&self) -> Option<&[PrimeSequenceSpec]> {
        self.specs.as_deref()
    }

    pub fn is_properly_arranged(&self) -> bool {
        self.properly_arranged
    }

    /// First `n` terms of each coordinate sequence: the given sequences when
    /// present, otherwise the slot sequences of an arranged product.
    pub fn bonding_terms(&self, n: usize) -> Result<Vec<Vec<i64>>, ProductError> {
        match (&self.specs, self.properly_arranged) {
            (Some(specs), _) => Ok(specs.iter().map(|s| s.take(n)).collect()),
            (None, true) => Ok(self
                .coordinates
                .iter()
                .map(|c| slot_terms(c, n).into_iter().map(|x| x as i64).collect())
                .collect()),
            (None, false) => Err(ProductError::MissingSpecs),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawProduct {
    coordinates: Vec<Descriptor>,
    #[serde(default)]
    arrange: bool,
}

impl Serialize for ProductSolenoid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coordinates = match &self.specs {
            Some(specs) => specs.iter().cloned().map(Descriptor::Spec).collect(),
            None => self.coordinates.iter().cloned().map(Descriptor::Number).collect(),
        };
        RawProduct {
            coordinates,
            arrange: false,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProductSolenoid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawProduct::deserialize(d)?;
        let p = ProductSolenoid::from_descriptors(&raw.coordinates).map_err(serde::de::Error::custom)?;
        Ok(if raw.arrange { p.arranged() } else { p })
    }
}

/// `diag(p_k^1, …, p_k^n)` for `k = 1..=n`.
pub fn bonding_matrices(p: &ProductSolenoid, n: usize) -> Result<Vec<IntMatrix>, ProductError> {
    let terms = p.bonding_terms(n)?;
    Ok((0..n)
        .map(|k| {
            let diag: Vec<_> = terms.iter().map(|t| t[k].into()).collect();
            IntMatrix::diagonal(&diag)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WhichMatrix {
    A,
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailingEntry {
    /// 1-based row
    pub i: usize,
    /// 1-based column
    pub j: usize,
    pub matrix: WhichMatrix,
    pub verdict: MultiplierVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutVerdict {
    pub is_automorphism: bool,
    pub singular: bool,
    pub failing_entry: Option<FailingEntry>,
}

fn first_bad_entry(m: &RationalMatrix, coords: &[SupernaturalNumber], which: WhichMatrix) -> Option<FailingEntry> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = is_proper_multiplier(m.get(i, j), &coords[j], &coords[i]);
            if !v.proper {
                return Some(FailingEntry {
                    i: i + 1,
                    j: j + 1,
                    matrix: which,
                    verdict: v,
                });
            }
        }
    }
    None
}

/// `A` induces an automorphism iff it is invertible and every entry of `A`
/// and `A⁻¹` in position `(i, j)` is a proper `P_j → P_i` multiplier.
pub fn is_automorphism(a: &RationalMatrix, p: &ProductSolenoid) -> Result<AutVerdict, ProductError> {
    let n = p.dim();
    if a.rows() != n || a.cols() != n {
        return Err(ProductError::SizeMismatch {
            expected: n,
            found: if a.rows() != n { a.rows() } else { a.cols() },
        });
    }
    if !p.is_properly_arranged() {
        return Err(ProductError::NotProperlyArranged);
    }
    let inv = match a.inverse() {
        Ok(inv) => inv,
        Err(MatrixError::Singular) => {
            return Ok(AutVerdict {
                is_automorphism: false,
                singular: true,
                failing_entry: None,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let failing = first_bad_entry(a, p.coordinates(), WhichMatrix::A)
        .or_else(|| first_bad_entry(&inv, p.coordinates(), WhichMatrix::Inverse));
    Ok(AutVerdict {
        is_automorphism: failing.is_none(),
        singular: false,
        failing_entry: failing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case2D {
    Equal,
    StrictlyGreater,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape2D {
    Full,
    LowerTriangular,
    UpperTriangular,
    Diagonal,
}

impl Shape2D {
    /// Whether position `(i, j)` (0-based) may hold a nonzero entry.
    pub fn allows(self, i: usize, j: usize) -> bool {
        match self {
            Shape2D::Full => true,
            Shape2D::LowerTriangular => j <= i,
            Shape2D::UpperTriangular => i <= j,
            Shape2D::Diagonal => i == j,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutGroupForm2D {
    pub case: Case2D,
    pub shape: Shape2D,
    pub description: String,
}

/// Shape of the automorphism matrices of `Σ_P × Σ_Q`.
pub fn aut_group_form_2d(p: &SupernaturalNumber, q: &SupernaturalNumber) -> AutGroupForm2D {
    let (case, shape, description) = match compare(p, q).verdict {
        OrderRelation::Equivalent => (
            Case2D::Equal,
            Shape2D::Full,
            "[[a,b],[c,d]], entries of A and A^-1 proper P->P multipliers",
        ),
        OrderRelation::GreaterOrEqual => (
            Case2D::StrictlyGreater,
            Shape2D::LowerTriangular,
            "[[a,0],[c,d]], a iso-multiplier of P, d iso-multiplier of Q, c and c/(ad) proper P->Q",
        ),
        OrderRelation::LessOrEqual => (
            Case2D::StrictlyGreater,
            Shape2D::UpperTriangular,
            "[[a,b],[0,d]], a iso-multiplier of P, d iso-multiplier of Q, b and b/(ad) proper Q->P",
        ),
        OrderRelation::Incomparable => (
            Case2D::Incomparable,
            Shape2D::Diagonal,
            "[[a,0],[0,d]], a iso-multiplier of P, d iso-multiplier of Q",
        ),
    };
    AutGroupForm2D {
        case,
        shape,
        description: description.to_string(),
    }
}

impl AutGroupForm2D {
    pub fn admits_zero_pattern(&self, a: &RationalMatrix) -> bool {
        (0..2).all(|i| (0..2).all(|j| self.shape.allows(i, j) || a.get(i, j).is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supernatural::Exponent;

    fn dyadic() -> SupernaturalNumber {
        SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap()
    }

    fn ratmat(rows: &[&[(i64, i64)]]) -> RationalMatrix {
        RationalMatrix::from_ratio_rows(rows).unwrap()
    }

    #[test]
    fn bonding_examples() {
        let twos = PrimeSequenceSpec::repeat(vec![2]).unwrap();
        let p = ProductSolenoid::from_specs(vec![twos.clone()]).unwrap();
        let m = bonding_matrices(&p, 2).unwrap();
        assert_eq!(m, vec![IntMatrix::from_i64_rows(&[&[2]]).unwrap(); 2]);

        let p = ProductSolenoid::from_specs(vec![twos, PrimeSequenceSpec::ones()]).unwrap();
        assert_eq!(
            bonding_matrices(&p, 1).unwrap()[0],
            IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]).unwrap()
        );

        let p = ProductSolenoid::from_specs(vec![PrimeSequenceSpec::finite(vec![6, 1, -90]).unwrap()]).unwrap();
        let diag: Vec<i64> = bonding_matrices(&p, 3)
            .unwrap()
            .iter()
            .map(|m| i64::try_from(m.get(0, 0)).unwrap())
            .collect();
        assert_eq!(diag, vec![6, 1, -90]);

        let q = ProductSolenoid::new(vec![dyadic()]).unwrap();
        assert!(bonding_matrices(&q, 2).is_ok());
        let unarranged = ProductSolenoid::new(vec![
            SupernaturalNumber::from_primes([(2, Exponent::Finite(3))]).unwrap(),
            SupernaturalNumber::one(),
        ])
        .unwrap();
        assert_eq!(bonding_matrices(&unarranged, 2), Err(ProductError::MissingSpecs));
    }

    #[test]
    fn automorphism_examples() {
        let dd = ProductSolenoid::new(vec![dyadic(), dyadic()]).unwrap();
        let swap = ratmat(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        assert!(is_automorphism(&swap, &dd).unwrap().is_automorphism);
        let half = ratmat(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 1)]]);
        assert!(is_automorphism(&half, &dd).unwrap().is_automorphism);

        let torus = ProductSolenoid::new(vec![SupernaturalNumber::one(), SupernaturalNumber::one()]).unwrap();
        let v = is_automorphism(&half, &torus).unwrap();
        assert!(!v.is_automorphism);
        let f = v.failing_entry.unwrap();
        assert_eq!((f.i, f.j, f.matrix), (1, 1, WhichMatrix::A));
    }

    #[test]
    fn automorphism_errors() {
        let dd = ProductSolenoid::new(vec![dyadic(), dyadic()]).unwrap();
        let one = ratmat(&[&[(1, 1)]]);
        assert!(matches!(
            is_automorphism(&one, &dd),
            Err(ProductError::SizeMismatch { .. })
        ));
        let unarranged = ProductSolenoid::new(vec![
            SupernaturalNumber::from_primes([(2, Exponent::Finite(3))]).unwrap(),
            SupernaturalNumber::one(),
        ])
        .unwrap();
        let id = RationalMatrix::identity(2);
        assert_eq!(is_automorphism(&id, &unarranged), Err(ProductError::NotProperlyArranged));
        assert!(is_automorphism(&id, &unarranged.arranged()).unwrap().is_automorphism);
        let sing = ratmat(&[&[(1, 1), (1, 1)], &[(1, 1), (1, 1)]]);
        assert!(is_automorphism(&sing, &dd).unwrap().singular);
    }

    #[test]
    fn forms() {
        assert_eq!(aut_group_form_2d(&dyadic(), &dyadic()).shape, Shape2D::Full);
        let six = SupernaturalNumber::from_primes([(2, Exponent::Infinite), (3, Exponent::Infinite)]).unwrap();
        let f = aut_group_form_2d(&six, &dyadic());
        assert_eq!((f.case, f.shape), (Case2D::StrictlyGreater, Shape2D::LowerTriangular));
        let g = aut_group_form_2d(&dyadic(), &six);
        assert_eq!(g.shape, Shape2D::UpperTriangular);
        let odd = SupernaturalNumber::from_spec(&PrimeSequenceSpec::indexed_primes(1, 2).unwrap());
        let even = SupernaturalNumber::from_spec(&PrimeSequenceSpec::indexed_primes(0, 2).unwrap());
        let h = aut_group_form_2d(&odd, &even);
        assert_eq!((h.case, h.shape), (Case2D::Incomparable, Shape2D::Diagonal));
    }

    #[test]
    fn json_round_trip() {
        let p: ProductSolenoid = serde_json::from_str(
            r#"{"coordinates":[{"exceptions":{"2":"inf"}},{"tail":{"kind":"all_ones"}}]}"#,
        )
        .unwrap();
        assert_eq!(p.dim(), 2);
        assert!(p.specs().is_none());
        let back: ProductSolenoid = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
