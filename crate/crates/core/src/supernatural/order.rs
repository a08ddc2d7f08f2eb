use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::number::{Exponent, SupernaturalNumber};
use crate::exactnum::primes::nth_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderRelation {
    LessOrEqual,
    GreaterOrEqual,
    Equivalent,
    Incomparable,
}

/// A set of prime indices `k ≡ r (mod m)` on which the two exponents are
/// constant, away from finitely many exceptional primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassObstruction {
    pub r: u64,
    pub m: u64,
    pub left: Exponent,
    pub right: Exponent,
}

/// Why `P ≤ Q` fails: a prime with `card_p(P) = ∞ > card_p(Q)`, or an
/// infinite class of primes each contributing excess.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    Prime {
        prime: u64,
        left: Exponent,
        right: Exponent,
    },
    Class {
        class: ClassObstruction,
        sample_prime: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeExcess {
    pub prime: u64,
    pub excess: u64,
}

/// `P ≤ Q` either holds, after deleting the listed finite excess from `P'`,
/// or fails with an obstruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Domination {
    Holds { excess: Vec<PrimeExcess> },
    Fails { obstruction: Obstruction },
}

impl Domination {
    pub fn holds(&self) -> bool {
        matches!(self, Domination::Holds { .. })
    }

    /// Number of terms to delete from `P'`, when finite.
    pub fn total_excess(&self) -> Option<u64> {
        match self {
            Domination::Holds { excess } => Some(excess.iter().map(|e| e.excess).sum()),
            Domination::Fails { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub verdict: OrderRelation,
    /// `P ≤ Q`
    pub forward: Domination,
    /// `Q ≤ P`
    pub backward: Domination,
}

impl OrderVerdict {
    pub fn le(&self) -> bool {
        self.forward.holds()
    }

    pub fn ge(&self) -> bool {
        self.backward.holds()
    }
}

fn dominated(p: &SupernaturalNumber, q: &SupernaturalNumber) -> Domination {
    let m = (p.modulus() as u64).lcm(&(q.modulus() as u64));
    for c in 0..m {
        let a = p.pattern()[(c % p.modulus() as u64) as usize];
        let b = q.pattern()[(c % q.modulus() as u64) as usize];
        if a > b {
            let first = if c == 0 { m } else { c };
            let sample_prime = (0..)
                .map(|t| nth_prime((first + t * m) as usize))
                .find(|x| !p.exceptions().contains_key(x) && !q.exceptions().contains_key(x))
                .expect("classes are infinite");
            return Domination::Fails {
                obstruction: Obstruction::Class {
                    class: ClassObstruction {
                        r: c,
                        m,
                        left: a,
                        right: b,
                    },
                    sample_prime,
                },
            };
        }
    }
    let mut primes: Vec<u64> = p
        .exceptions()
        .keys()
        .chain(q.exceptions().keys())
        .copied()
        .collect();
    primes.sort_unstable();
    primes.dedup();
    let mut excess = Vec::new();
    for prime in primes {
        match (p.card(prime), q.card(prime)) {
            (Exponent::Infinite, Exponent::Finite(_)) => {
                return Domination::Fails {
                    obstruction: Obstruction::Prime {
                        prime,
                        left: Exponent::Infinite,
                        right: q.card(prime),
                    },
                }
            }
            (Exponent::Finite(a), Exponent::Finite(b)) if a > b => excess.push(PrimeExcess {
                prime,
                excess: a - b,
            }),
            _ => {}
        }
    }
    Domination::Holds { excess }
}

/// The Bing order: `P ≤ Q` iff finitely many terms can be deleted from `P'`
/// so that every prime occurs in `P'` at most as often as in `Q'`.
pub fn compare(p: &SupernaturalNumber, q: &SupernaturalNumber) -> OrderVerdict {
    let forward = dominated(p, q);
    let backward = dominated(q, p);
    let verdict = match (forward.holds(), backward.holds()) {
        (true, true) => OrderRelation::Equivalent,
        (true, false) => OrderRelation::LessOrEqual,
        (false, true) => OrderRelation::GreaterOrEqual,
        (false, false) => OrderRelation::Incomparable,
    };
    OrderVerdict {
        verdict,
        forward,
        backward,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supernatural::PrimeSequenceSpec;

    fn sn(pairs: &[(u64, Exponent)]) -> SupernaturalNumber {
        SupernaturalNumber::from_primes(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn finite_below_infinite() {
        let v = compare(
            &sn(&[(2, Exponent::Finite(3))]),
            &sn(&[(2, Exponent::Infinite)]),
        );
        assert_eq!(v.verdict, OrderRelation::LessOrEqual);
        assert_eq!(v.forward.total_excess(), Some(0));
        assert!(matches!(
            v.backward,
            Domination::Fails {
                obstruction: Obstruction::Prime { prime: 2, .. }
            }
        ));
    }

    #[test]
    fn powers_of_two_equivalent_to_twos() {
        let a = SupernaturalNumber::from_spec(&PrimeSequenceSpec::repeat(vec![2, 4, 8]).unwrap());
        let b = SupernaturalNumber::from_spec(&PrimeSequenceSpec::repeat(vec![2]).unwrap());
        assert_eq!(compare(&a, &b).verdict, OrderRelation::Equivalent);
    }

    #[test]
    fn odd_and_even_indexed_primes() {
        let odd = SupernaturalNumber::from_spec(&PrimeSequenceSpec::indexed_primes(1, 2).unwrap());
        let even = SupernaturalNumber::from_spec(&PrimeSequenceSpec::indexed_primes(0, 2).unwrap());
        let v = compare(&odd, &even);
        assert_eq!(v.verdict, OrderRelation::Incomparable);
        match v.forward {
            Domination::Fails {
                obstruction: Obstruction::Class { class, sample_prime },
            } => {
                assert_eq!((class.r, class.m), (1, 2));
                assert_eq!(sample_prime, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn finite_excess_is_reported() {
        let v = compare(
            &sn(&[(2, Exponent::Finite(3)), (5, Exponent::Finite(1))]),
            &sn(&[(2, Exponent::Finite(1))]),
        );
        assert_eq!(v.verdict, OrderRelation::Equivalent);
        assert_eq!(v.forward.total_excess(), Some(3));
        assert_eq!(v.backward.total_excess(), Some(0));
    }

    #[test]
    fn torus_is_minimal() {
        let v = compare(&sn(&[(2, Exponent::Infinite)]), &SupernaturalNumber::one());
        assert_eq!(v.verdict, OrderRelation::GreaterOrEqual);
        let u = compare(&SupernaturalNumber::universal(), &sn(&[(3, Exponent::Infinite)]));
        assert_eq!(u.verdict, OrderRelation::GreaterOrEqual);
    }
}
