use serde::{Deserialize, Serialize};

use super::SupernaturalError;
use crate::exactnum::primes::{factorize, nth_prime};

/// How a finitely presented sequence continues after its head.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailRule {
    AllOnes,
    Repeat { values: Vec<i64> },
    /// The primes `p_k` (1-based) with `k ≡ r (mod m)`, in increasing order.
    IndexedPrimes { r: u64, m: u64 },
}

/// A sequence of nonzero integers `(p_1, p_2, ...)` given by a finite head
/// followed by a periodic or prime-indexed tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct PrimeSequenceSpec {
    head: Vec<i64>,
    tail: TailRule,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    head: Vec<i64>,
    tail: TailRule,
}

impl TryFrom<RawSpec> for PrimeSequenceSpec {
    type Error = SupernaturalError;

    fn try_from(raw: RawSpec) -> Result<Self, Self::Error> {
        PrimeSequenceSpec::new(raw.head, raw.tail)
    }
}

impl From<PrimeSequenceSpec> for RawSpec {
    fn from(s: PrimeSequenceSpec) -> Self {
        RawSpec {
            head: s.head,
            tail: s.tail,
        }
    }
}

impl PrimeSequenceSpec {
    pub fn new(head: Vec<i64>, tail: TailRule) -> Result<Self, SupernaturalError> {
        if head.contains(&0) {
            return Err(SupernaturalError::ZeroTerm);
        }
        match &tail {
            TailRule::AllOnes => {}
            TailRule::Repeat { values } => {
                if values.is_empty() {
                    return Err(SupernaturalError::EmptyRepeat);
                }
                if values.contains(&0) {
                    return Err(SupernaturalError::ZeroTerm);
                }
            }
            TailRule::IndexedPrimes { r, m } => {
                if *m == 0 || r >= m {
                    return Err(SupernaturalError::BadClass { r: *r, m: *m });
                }
            }
        }
        Ok(PrimeSequenceSpec { head, tail })
    }

    /// `(1, 1, ...)`, the sequence of the circle.
    pub fn ones() -> Self {
        PrimeSequenceSpec {
            head: Vec::new(),
            tail: TailRule::AllOnes,
        }
    }

    pub fn repeat(values: Vec<i64>) -> Result<Self, SupernaturalError> {
        Self::new(Vec::new(), TailRule::Repeat { values })
    }

    pub fn finite(head: Vec<i64>) -> Result<Self, SupernaturalError> {
        Self::new(head, TailRule::AllOnes)
    }

    pub fn indexed_primes(r: u64, m: u64) -> Result<Self, SupernaturalError> {
        Self::new(Vec::new(), TailRule::IndexedPrimes { r, m })
    }

    pub fn head(&self) -> &[i64] {
        &self.head
    }

    pub fn tail(&self) -> &TailRule {
        &self.tail
    }

    /// The terms of the sequence, without end.
    pub fn terms(&self) -> impl Iterator<Item = i64> + '_ {
        let tail: Box<dyn Iterator<Item = i64> + '_> = match &self.tail {
            TailRule::AllOnes => Box::new(std::iter::repeat(1)),
            TailRule::Repeat { values } => Box::new(values.iter().copied().cycle()),
            TailRule::IndexedPrimes { r, m } => {
                let first = if *r == 0 { *m } else { *r };
                Box::new((0..).map(move |n| nth_prime((first + n * m) as usize) as i64))
            }
        };
        self.head.iter().copied().chain(tail)
    }

    pub fn take(&self, n: usize) -> Vec<i64> {
        self.terms().take(n).collect()
    }
}

/// First `n` terms of the derived sequence: each `|p_i|` is replaced by its
/// prime factors in increasing order, and 1s stay as they are.
pub fn derived_sequence(spec: &PrimeSequenceSpec, n: usize) -> Vec<u64> {
    spec.terms()
        .flat_map(|t| {
            let a = t.unsigned_abs();
            if a == 1 {
                vec![1]
            } else {
                factorize(a)
            }
        })
        .take(n)
        .collect()
}
