//! Rational multipliers between 1-solenoids: which scalars `r` extend from
//! path components to continuous homomorphisms `Σ_P → Σ_Q`.

mod probe;

pub use probe::{continuity_probe, ProbeReport, ProbeVerdict};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{prime_support, Rational};
use crate::supernatural::{compare, OrderRelation, SupernaturalNumber};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiplierError {
    #[error("zero has no inverse")]
    ZeroInput,
    #[error("source of the outer map differs from the target of the inner map")]
    SourceTargetMismatch,
    #[error("{0} is not a proper multiplier between these solenoids")]
    NotProper(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierReason {
    Zero,
    IntegerTimesInvertedDivisors,
    OrderObstruction { relation: OrderRelation },
    BadDenominatorPrime { prime: u64 },
    /// The denominator has a cofactor too large to factor.
    Unfactorable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierVerdict {
    pub proper: bool,
    pub reason: MultiplierReason,
}

/// First prime factor of `n` that does not divide `p`, `Err(())` when the
/// factorization is out of reach.
fn foreign_prime(n: &BigInt, p: &SupernaturalNumber) -> Result<Option<u64>, ()> {
    let mut rest = n.abs();
    if let Some(divisors) = p.finite_divisor_set() {
        for q in divisors {
            let q = BigInt::from(q);
            while (&rest % &q).is_zero() {
                rest /= &q;
            }
        }
        if rest.is_one() {
            return Ok(None);
        }
    }
    let support = prime_support(&rest).ok_or(())?;
    Ok(support.into_iter().find(|&q| !p.divides(q)))
}

/// `r = c/d` is proper `P → Q` iff `r = 0`, or `P ≥ Q` and every prime
/// factor of `d` divides `P`.
pub fn is_proper_multiplier(
    r: &Rational,
    p: &SupernaturalNumber,
    q: &SupernaturalNumber,
) -> MultiplierVerdict {
    if r.is_zero() {
        return MultiplierVerdict {
            proper: true,
            reason: MultiplierReason::Zero,
        };
    }
    let order = compare(p, q);
    if !order.ge() {
        return MultiplierVerdict {
            proper: false,
            reason: MultiplierReason::OrderObstruction {
                relation: order.verdict,
            },
        };
    }
    match foreign_prime(r.denom(), p) {
        Ok(None) => MultiplierVerdict {
            proper: true,
            reason: MultiplierReason::IntegerTimesInvertedDivisors,
        },
        Ok(Some(prime)) => MultiplierVerdict {
            proper: false,
            reason: MultiplierReason::BadDenominatorPrime { prime },
        },
        Err(()) => MultiplierVerdict {
            proper: false,
            reason: MultiplierReason::Unfactorable,
        },
    }
}

/// `r` and `1/r` are both proper `P → P` multipliers.
pub fn is_iso_multiplier(r: &Rational, p: &SupernaturalNumber) -> Result<bool, MultiplierError> {
    if r.is_zero() {
        return Err(MultiplierError::ZeroInput);
    }
    Ok(matches!(foreign_prime(r.numer(), p), Ok(None))
        && matches!(foreign_prime(r.denom(), p), Ok(None)))
}

/// The homomorphism `r_{P→Q}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarMorphism {
    #[serde(with = "crate::exactnum::rational_string")]
    r: Rational,
    source: SupernaturalNumber,
    target: SupernaturalNumber,
}

impl ScalarMorphism {
    pub fn new(
        r: Rational,
        source: SupernaturalNumber,
        target: SupernaturalNumber,
    ) -> Result<Self, MultiplierError> {
        if !is_proper_multiplier(&r, &source, &target).proper {
            return Err(MultiplierError::NotProper(crate::exactnum::format_rational(&r)));
        }
        Ok(ScalarMorphism { r, source, target })
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn source(&self) -> &SupernaturalNumber {
        &self.source
    }

    pub fn target(&self) -> &SupernaturalNumber {
        &self.target
    }

    /// `self ∘ inner`, defined when `inner` lands where `self` starts.
    pub fn compose(&self, inner: &ScalarMorphism) -> Result<ScalarMorphism, MultiplierError> {
        if compare(&self.source, &inner.target).verdict != OrderRelation::Equivalent {
            return Err(MultiplierError::SourceTargetMismatch);
        }
        ScalarMorphism::new(
            &self.r * &inner.r,
            inner.source.clone(),
            self.target.clone(),
        )
    }
}

pub fn compose(f: &ScalarMorphism, g: &ScalarMorphism) -> Result<ScalarMorphism, MultiplierError> {
    f.compose(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{integer, rational};
    use crate::supernatural::{Exponent, PrimeSequenceSpec};

    fn dyadic() -> SupernaturalNumber {
        SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap()
    }

    #[test]
    fn proper_examples() {
        let d = dyadic();
        assert!(is_proper_multiplier(&rational(3, 2), &d, &d).proper);
        assert_eq!(
            is_proper_multiplier(&rational(1, 3), &d, &d).reason,
            MultiplierReason::BadDenominatorPrime { prime: 3 }
        );
        let odd = SupernaturalNumber::from_spec(&PrimeSequenceSpec::indexed_primes(1, 2).unwrap());
        let even = SupernaturalNumber::from_spec(&PrimeSequenceSpec::indexed_primes(0, 2).unwrap());
        assert_eq!(
            is_proper_multiplier(&integer(5), &odd, &even).reason,
            MultiplierReason::OrderObstruction {
                relation: OrderRelation::Incomparable
            }
        );
        assert!(is_proper_multiplier(&integer(0), &odd, &even).proper);
    }

    #[test]
    fn iso_examples() {
        assert_eq!(is_iso_multiplier(&integer(2), &dyadic()), Ok(true));
        assert_eq!(is_iso_multiplier(&integer(2), &SupernaturalNumber::one()), Ok(false));
        assert_eq!(is_iso_multiplier(&integer(-1), &SupernaturalNumber::one()), Ok(true));
        assert_eq!(
            is_iso_multiplier(&integer(0), &dyadic()),
            Err(MultiplierError::ZeroInput)
        );
    }

    #[test]
    fn composition() {
        let d = dyadic();
        let half = ScalarMorphism::new(rational(1, 2), d.clone(), d.clone()).unwrap();
        let two = ScalarMorphism::new(integer(2), d.clone(), d.clone()).unwrap();
        assert_eq!(half.compose(&two).unwrap().r(), &integer(1));

        let p = SupernaturalNumber::from_primes([(2, Exponent::Infinite), (3, Exponent::Infinite)]).unwrap();
        let three = ScalarMorphism::new(integer(3), p.clone(), d.clone()).unwrap();
        let half_p = ScalarMorphism::new(rational(1, 2), p.clone(), p.clone()).unwrap();
        let c = three.compose(&half_p).unwrap();
        assert_eq!(c.r(), &rational(3, 2));
        assert!(is_proper_multiplier(c.r(), &p, &d).proper);

        let zero = ScalarMorphism::new(integer(0), p.clone(), d.clone()).unwrap();
        assert_eq!(zero.compose(&half_p).unwrap().r(), &integer(0));
        assert_eq!(half_p.compose(&two), Err(MultiplierError::SourceTargetMismatch));
    }
}
