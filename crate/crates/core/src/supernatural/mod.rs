//! Prime sequences, their multiplicity functions, the Bing order and the
//! proper arrangement of finitely many sequences.

mod arrange;
mod number;
mod order;
mod sequence;

pub use arrange::{
    diagonal_bijection, diagonal_inverse, is_properly_arranged, pi_sequence, proper_arrangement,
    proper_arrangement_specs, slot_terms,
};
pub use number::{Exponent, SupernaturalNumber};
pub use order::{compare, ClassObstruction, Domination, Obstruction, OrderRelation, OrderVerdict};
pub use sequence::{derived_sequence, PrimeSequenceSpec, TailRule};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupernaturalError {
    #[error("sequence terms must be nonzero")]
    ZeroTerm,
    #[error("repeat tail needs at least one value")]
    EmptyRepeat,
    #[error("bad residue class {r} mod {m}")]
    BadClass { r: u64, m: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} listed twice")]
    DuplicatePrime(u64),
}

/// Either form accepted wherever a 1-solenoid is expected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Descriptor {
    Spec(PrimeSequenceSpec),
    Number(SupernaturalNumber),
}

impl Descriptor {
    pub fn supernatural(&self) -> SupernaturalNumber {
        match self {
            Descriptor::Spec(s) => SupernaturalNumber::from_spec(s),
            Descriptor::Number(n) => n.clone(),
        }
    }

    pub fn spec(&self) -> Option<&PrimeSequenceSpec> {
        match self {
            Descriptor::Spec(s) => Some(s),
            Descriptor::Number(_) => None,
        }
    }
}

/// `card_p(P')` for either kind of descriptor.
pub fn cardinality(d: &Descriptor, p: u64) -> Result<Exponent, SupernaturalError> {
    if !crate::exactnum::primes::is_prime(p) {
        return Err(SupernaturalError::NotPrime(p));
    }
    Ok(d.supernatural().card(p))
}

pub fn to_supernatural(spec: &PrimeSequenceSpec) -> SupernaturalNumber {
    SupernaturalNumber::from_spec(spec)
}

/// `p | P`, i.e. `card_p(P) = ∞`.
pub fn divides(p: u64, s: &SupernaturalNumber) -> bool {
    s.divides(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_accepts_both_forms() {
        let a: Descriptor = serde_json::from_str(r#"{"tail":{"kind":"repeat","values":[2]}}"#).unwrap();
        let b: Descriptor = serde_json::from_str(r#"{"exceptions":{"2":"inf"}}"#).unwrap();
        assert!(matches!(a, Descriptor::Spec(_)));
        assert!(matches!(b, Descriptor::Number(_)));
        assert_eq!(a.supernatural(), b.supernatural());
        let torus: Descriptor = serde_json::from_str("{}").unwrap();
        assert_eq!(torus.supernatural(), SupernaturalNumber::one());
    }

    #[test]
    fn cardinality_rejects_composites() {
        let d = Descriptor::Number(SupernaturalNumber::one());
        assert_eq!(cardinality(&d, 4), Err(SupernaturalError::NotPrime(4)));
        assert_eq!(cardinality(&d, 2), Ok(Exponent::ZERO));
    }
}
