use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::sequence::{PrimeSequenceSpec, TailRule};
use super::SupernaturalError;
use crate::exactnum::primes::{factor_exponents, is_prime, nth_prime, prime_index};

/// Multiplicity of a prime, with `Infinite` above every natural number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent::Finite(0);

    pub fn is_infinite(self) -> bool {
        self == Exponent::Infinite
    }

    pub fn is_zero(self) -> bool {
        self == Exponent::ZERO
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Exponent::Finite(e) => Some(e),
            Exponent::Infinite => None,
        }
    }
}

impl std::ops::Add for Exponent {
    type Output = Exponent;

    fn add(self, rhs: Exponent) -> Exponent {
        match (self, rhs) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(e) => s.serialize_u64(*e),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(e) => Ok(Exponent::Finite(e)),
            Repr::Str(s) if matches!(s.as_str(), "inf" | "∞" | "infinity") => Ok(Exponent::Infinite),
            Repr::Str(s) => Err(D::Error::custom(format!("bad exponent {s:?}"))),
        }
    }
}

/// The multiplicity function `p ↦ card_p` of a sequence of primes, i.e. the
/// isomorphism invariant of a 1-solenoid.
///
/// Stored as a periodic pattern over prime indices (`pattern[k % modulus]`
/// gives the exponent of the `k`-th prime, 1-based) overridden at finitely
/// many primes. The representation is canonical: the pattern has minimal
/// period and no exception repeats its pattern value, so structural equality
/// is equality of multiplicity functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupernaturalNumber {
    pattern: Vec<Exponent>,
    exceptions: BTreeMap<u64, Exponent>,
}

impl SupernaturalNumber {
    /// All exponents zero: the class of `(1, 1, ...)`, i.e. the circle.
    pub fn one() -> Self {
        SupernaturalNumber {
            pattern: vec![Exponent::ZERO],
            exceptions: BTreeMap::new(),
        }
    }

    /// Every prime with infinite multiplicity, the maximal class.
    pub fn universal() -> Self {
        SupernaturalNumber {
            pattern: vec![Exponent::Infinite],
            exceptions: BTreeMap::new(),
        }
    }

    /// Finitely many primes with the given exponents; zero elsewhere.
    pub fn from_primes<I: IntoIterator<Item = (u64, Exponent)>>(
        primes: I,
    ) -> Result<Self, SupernaturalError> {
        Self::from_parts(vec![Exponent::ZERO], primes)
    }

    /// A pattern over prime indices plus overrides at individual primes.
    pub fn from_parts<I: IntoIterator<Item = (u64, Exponent)>>(
        pattern: Vec<Exponent>,
        exceptions: I,
    ) -> Result<Self, SupernaturalError> {
        if pattern.is_empty() {
            return Err(SupernaturalError::BadClass { r: 0, m: 0 });
        }
        let mut map = BTreeMap::new();
        for (p, e) in exceptions {
            if !is_prime(p) {
                return Err(SupernaturalError::NotPrime(p));
            }
            if map.insert(p, e).is_some() {
                return Err(SupernaturalError::DuplicatePrime(p));
            }
        }
        let mut s = SupernaturalNumber {
            pattern,
            exceptions: map,
        };
        s.canonicalize();
        Ok(s)
    }

    fn canonicalize(&mut self) {
        let m = self.pattern.len();
        let period = (1..=m)
            .filter(|d| m % d == 0)
            .find(|&d| (0..m).all(|i| self.pattern[i] == self.pattern[i % d]))
            .unwrap_or(m);
        self.pattern.truncate(period);
        let pattern = self.pattern.clone();
        self.exceptions
            .retain(|&p, e| *e != class_value(&pattern, p));
    }

    pub fn modulus(&self) -> usize {
        self.pattern.len()
    }

    pub fn pattern(&self) -> &[Exponent] {
        &self.pattern
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, Exponent> {
        &self.exceptions
    }

    /// Exponent of the prime `p`.
    pub fn card(&self, p: u64) -> Exponent {
        match self.exceptions.get(&p) {
            Some(e) => *e,
            None => class_value(&self.pattern, p),
        }
    }

    /// Exponent of the `k`-th prime (1-based).
    pub fn card_at_index(&self, k: usize) -> Exponent {
        if self.exceptions.is_empty() {
            return self.pattern[k % self.pattern.len()];
        }
        let p = nth_prime(k);
        match self.exceptions.get(&p) {
            Some(e) => *e,
            None => self.pattern[k % self.pattern.len()],
        }
    }

    /// `p | P`: the prime occurs infinitely often.
    pub fn divides(&self, p: u64) -> bool {
        self.card(p).is_infinite()
    }

    /// True when only finitely many primes have nonzero exponent and all of
    /// those exponents are finite: the class of the circle.
    pub fn is_torus_class(&self) -> bool {
        self.pattern == [Exponent::ZERO] && self.exceptions.values().all(|e| !e.is_infinite())
    }

    /// Primes of infinite multiplicity when there are finitely many of them.
    pub fn finite_divisor_set(&self) -> Option<Vec<u64>> {
        if self.pattern.iter().any(|e| e.is_infinite()) {
            return None;
        }
        Some(
            self.exceptions
                .iter()
                .filter(|(_, e)| e.is_infinite())
                .map(|(p, _)| *p)
                .collect(),
        )
    }

    /// Primes of infinite multiplicity among the first `count` primes.
    pub fn divisors_among_first(&self, count: usize) -> Vec<u64> {
        (1..=count)
            .filter(|&k| self.card_at_index(k).is_infinite())
            .map(nth_prime)
            .collect()
    }

    /// The multiplicity function of a finitely presented sequence, taking
    /// absolute values first.
    pub fn from_spec(spec: &PrimeSequenceSpec) -> Self {
        let mut head: BTreeMap<u64, u64> = BTreeMap::new();
        for t in spec.head() {
            for (p, e) in factor_exponents(t.unsigned_abs()) {
                *head.entry(p).or_default() += e;
            }
        }
        let (pattern, infinite): (Vec<Exponent>, Vec<u64>) = match spec.tail() {
            TailRule::AllOnes => (vec![Exponent::ZERO], Vec::new()),
            TailRule::Repeat { values } => {
                let mut inf: Vec<u64> = values
                    .iter()
                    .flat_map(|v| factor_exponents(v.unsigned_abs()))
                    .map(|(p, _)| p)
                    .collect();
                inf.sort_unstable();
                inf.dedup();
                (vec![Exponent::ZERO], inf)
            }
            TailRule::IndexedPrimes { r, m } => {
                let mut pat = vec![Exponent::ZERO; *m as usize];
                pat[*r as usize] = Exponent::Finite(1);
                (pat, Vec::new())
            }
        };
        let mut exceptions: BTreeMap<u64, Exponent> = BTreeMap::new();
        for p in infinite {
            exceptions.insert(p, Exponent::Infinite);
        }
        for (p, e) in head {
            let base = exceptions
                .get(&p)
                .copied()
                .unwrap_or_else(|| class_value(&pattern, p));
            exceptions.insert(p, base + Exponent::Finite(e));
        }
        let mut s = SupernaturalNumber {
            pattern,
            exceptions,
        };
        s.canonicalize();
        s
    }

    /// Applies `f` to the exponents prime by prime across several numbers and
    /// collects one result per output coordinate. The prime set is handled
    /// through the common pattern modulus plus the union of exception primes.
    pub(crate) fn combine<F>(inputs: &[SupernaturalNumber], outputs: usize, f: F) -> Vec<Self>
    where
        F: Fn(&[Exponent]) -> Vec<Exponent>,
    {
        let modulus = inputs
            .iter()
            .fold(1usize, |acc, s| acc.lcm(&s.modulus()));
        let mut patterns = vec![Vec::with_capacity(modulus); outputs];
        for c in 0..modulus {
            let cards: Vec<Exponent> = inputs
                .iter()
                .map(|s| s.pattern[c % s.modulus()])
                .collect();
            for (slot, e) in patterns.iter_mut().zip(f(&cards)) {
                slot.push(e);
            }
        }
        let primes: std::collections::BTreeSet<u64> = inputs
            .iter()
            .flat_map(|s| s.exceptions.keys().copied())
            .collect();
        let mut exceptions = vec![BTreeMap::new(); outputs];
        for p in primes {
            let cards: Vec<Exponent> = inputs.iter().map(|s| s.card(p)).collect();
            for (slot, e) in exceptions.iter_mut().zip(f(&cards)) {
                slot.insert(p, e);
            }
        }
        patterns
            .into_iter()
            .zip(exceptions)
            .map(|(pattern, exceptions)| {
                let mut s = SupernaturalNumber {
                    pattern,
                    exceptions,
                };
                s.canonicalize();
                s
            })
            .collect()
    }
}

fn class_value(pattern: &[Exponent], p: u64) -> Exponent {
    if pattern.len() == 1 {
        return pattern[0];
    }
    let k = prime_index(p).expect("exception keys are prime");
    pattern[k % pattern.len()]
}

impl From<&PrimeSequenceSpec> for SupernaturalNumber {
    fn from(spec: &PrimeSequenceSpec) -> Self {
        SupernaturalNumber::from_spec(spec)
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .exceptions
            .iter()
            .map(|(p, e)| format!("{p}:{e}"))
            .collect();
        if self.pattern.len() == 1 {
            if !self.pattern[0].is_zero() {
                parts.push(format!("default {}", self.pattern[0]));
            }
        } else {
            for (r, e) in self.pattern.iter().enumerate() {
                if !e.is_zero() {
                    parts.push(format!("k≡{r} mod {}:{e}", self.pattern.len()));
                }
            }
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// JSON form: `{"exceptions":{"2":"inf"},"classes":[{"r":1,"m":2,"exp":1}],"default":0}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSupernatural {
    #[serde(default, deserialize_with = "prime_keys")]
    exceptions: BTreeMap<u64, Exponent>,
    #[serde(default)]
    classes: Vec<RawClass>,
    #[serde(default = "zero_exp")]
    default: Exponent,
}

// Keys arrive as strings when the value has been buffered (untagged enums).
fn prime_keys<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, Exponent>, D::Error> {
    BTreeMap::<String, Exponent>::deserialize(d)?
        .into_iter()
        .map(|(k, v)| {
            k.trim()
                .parse::<u64>()
                .map(|p| (p, v))
                .map_err(|_| D::Error::custom(format!("bad prime key {k:?}")))
        })
        .collect()
}

fn zero_exp() -> Exponent {
    Exponent::ZERO
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    r: u64,
    m: u64,
    exp: Exponent,
}

impl Serialize for SupernaturalNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let default = if self.pattern.contains(&Exponent::ZERO) || !self.pattern.contains(&Exponent::Infinite) {
            Exponent::ZERO
        } else {
            Exponent::Infinite
        };
        let m = self.pattern.len() as u64;
        let classes = self
            .pattern
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != default)
            .map(|(r, e)| RawClass {
                r: r as u64,
                m,
                exp: *e,
            })
            .collect();
        RawSupernatural {
            exceptions: self.exceptions.clone(),
            classes,
            default,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SupernaturalNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawSupernatural::deserialize(d)?;
        if !matches!(raw.default, Exponent::Finite(0) | Exponent::Infinite) {
            return Err(D::Error::custom("default exponent must be 0 or \"inf\""));
        }
        for (i, a) in raw.classes.iter().enumerate() {
            if a.m == 0 || a.r >= a.m {
                return Err(D::Error::custom(format!("bad class {} mod {}", a.r, a.m)));
            }
            for b in &raw.classes[..i] {
                if a.r.mod_floor(&a.m.gcd(&b.m)) == b.r.mod_floor(&a.m.gcd(&b.m)) {
                    return Err(D::Error::custom("classes overlap"));
                }
            }
        }
        let modulus = raw.classes.iter().fold(1u64, |acc, c| acc.lcm(&c.m)) as usize;
        let pattern = (0..modulus as u64)
            .map(|k| {
                raw.classes
                    .iter()
                    .find(|c| k % c.m == c.r)
                    .map_or(raw.default, |c| c.exp)
            })
            .collect();
        SupernaturalNumber::from_parts(pattern, raw.exceptions).map_err(D::Error::custom)
    }
}
