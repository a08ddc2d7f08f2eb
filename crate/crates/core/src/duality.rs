//! From a subgroup `G ⊂ (ℝ, +)` given by a ℚ-basis `β_1, …, β_n` and
//! generators `λ_i = Σ_j (c_j^i / d_j^i) β_j`, the diagonal bonding matrices
//! of the solenoid dual to `G`, and a finite-depth check that `G` is the
//! group generated by the `β_j / δ_j^i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{prime_support, IntMatrix, Rational};
use crate::supernatural::{Exponent, SupernaturalNumber};

/// Generators beyond this index are not inspected for a pattern.
const PATTERN_CHECK: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("presentation has no generators")]
    Empty,
    #[error("generator {0} has the wrong length")]
    Ragged(usize),
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("pattern bases must be at least 1")]
    BadBase,
    #[error("generator {generator} is not relatively prime at index {index}")]
    NotRelativelyPrime { generator: usize, index: usize },
    #[error("round trip failed at generator {0}")]
    RoundtripFailure(usize),
    #[error("denominator too large to factor")]
    Unfactorable,
}

/// `λ_i = Σ_j (c_j / b_j^i) β_j` for `i ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorPattern {
    pub numerators: Vec<i64>,
    pub bases: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generators {
    List(Vec<Vec<Rational>>),
    Pattern(GeneratorPattern),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct GroupPresentation {
    n: usize,
    generators: Generators,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<crate::exactnum::RationalMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pattern: Option<GeneratorPattern>,
}

impl TryFrom<RawPresentation> for GroupPresentation {
    type Error = String;
    fn try_from(raw: RawPresentation) -> Result<Self, String> {
        match (raw.generators, raw.pattern) {
            (Some(m), None) => GroupPresentation::from_list(m.to_rows()),
            (None, Some(p)) => GroupPresentation::from_pattern(p),
            _ => return Err("give exactly one of `generators` and `pattern`".into()),
        }
        .map_err(|e| e.to_string())
    }
}

impl From<GroupPresentation> for RawPresentation {
    fn from(g: GroupPresentation) -> Self {
        match g.generators {
            Generators::List(rows) => RawPresentation {
                generators: crate::exactnum::RationalMatrix::from_rows(rows).ok(),
                pattern: None,
            },
            Generators::Pattern(p) => RawPresentation {
                generators: None,
                pattern: Some(p),
            },
        }
    }
}

impl GroupPresentation {
    pub fn from_list(rows: Vec<Vec<Rational>>) -> Result<Self, DualityError> {
        let n = rows.first().ok_or(DualityError::Empty)?.len();
        if n == 0 {
            return Err(DualityError::Empty);
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(DualityError::Ragged(i + 1));
            }
            if r.iter().all(Zero::is_zero) {
                return Err(DualityError::ZeroGenerator(i + 1));
            }
        }
        Ok(GroupPresentation {
            n,
            generators: Generators::List(rows),
        })
    }

    pub fn from_pattern(p: GeneratorPattern) -> Result<Self, DualityError> {
        let n = p.bases.len();
        if n == 0 {
            return Err(DualityError::Empty);
        }
        if p.numerators.len() != n {
            return Err(DualityError::Ragged(1));
        }
        if p.bases.contains(&0) {
            return Err(DualityError::BadBase);
        }
        if p.numerators.iter().all(|&c| c == 0) {
            return Err(DualityError::ZeroGenerator(1));
        }
        Ok(GroupPresentation {
            n,
            generators: Generators::Pattern(p),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators, `None` for a pattern.
    pub fn len(&self) -> Option<usize> {
        match &self.generators {
            Generators::List(rows) => Some(rows.len()),
            Generators::Pattern(_) => None,
        }
    }

    /// Coefficients of `λ_i` (1-based); zero past the end of a finite list.
    pub fn generator(&self, i: usize) -> Vec<Rational> {
        match &self.generators {
            Generators::List(rows) => rows
                .get(i - 1)
                .cloned()
                .unwrap_or_else(|| vec![Rational::zero(); self.n]),
            Generators::Pattern(p) => p
                .numerators
                .iter()
                .zip(&p.bases)
                .map(|(&c, &b)| Rational::new(c.into(), BigInt::from(b).pow(i as u32)))
                .collect(),
        }
    }

    /// Denominators `d_j^i` of `λ_i`.
    pub fn denominators(&self, i: usize) -> Vec<BigInt> {
        self.generator(i).iter().map(|x| x.denom().clone()).collect()
    }

    fn checked_range(&self) -> usize {
        self.len().unwrap_or(PATTERN_CHECK)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativePrimality {
    pub relatively_prime: bool,
    /// 1-based generator and basis index of the first failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing: Option<(usize, usize)>,
}

/// `gcd(d_j, d / d_j) = 1` for every generator and `j`, with `d = d_1 ⋯ d_n`.
pub fn check_relatively_prime(g: &GroupPresentation) -> RelativePrimality {
    for i in 1..=g.checked_range() {
        let ds = g.denominators(i);
        let d: BigInt = ds.iter().product();
        for (j, dj) in ds.iter().enumerate() {
            if !dj.gcd(&(&d / dj)).is_one() {
                return RelativePrimality {
                    relatively_prime: false,
                    failing: Some((i, j + 1)),
                };
            }
        }
    }
    RelativePrimality {
        relatively_prime: true,
        failing: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPresentation {
    /// `M_i = diag(Δ_1^i, …, Δ_n^i)` for `i = 1..=N`.
    pub matrices: Vec<IntMatrix>,
    /// Row `i` holds `δ_1^i, …, δ_n^i`.
    pub deltas: IntMatrix,
    pub coordinates: Vec<SupernaturalNumber>,
}

fn lcm_step(g: &GroupPresentation, depth: usize) -> Vec<Vec<BigInt>> {
    let mut prev = vec![BigInt::one(); g.n];
    let mut out = Vec::with_capacity(depth);
    for i in 1..=depth {
        let cur: Vec<BigInt> = g.denominators(i).iter().zip(&prev).map(|(d, p)| d.lcm(p)).collect();
        out.push(cur.clone());
        prev = cur;
    }
    out
}

fn factor_counts(n: &BigInt) -> Result<Vec<(u64, u64)>, DualityError> {
    let ps = prime_support(n).ok_or(DualityError::Unfactorable)?;
    Ok(ps.into_iter().map(|p| (p, crate::exactnum::valuation(n, p))).collect())
}

/// Runs `δ_j^i = lcm(d_j^i, δ_j^{i−1})`, `Δ_j^i = δ_j^i / δ_j^{i−1}` for the
/// first `depth` generators.
pub fn dual_presentation(g: &GroupPresentation, depth: usize) -> Result<DualPresentation, DualityError> {
    if depth == 0 {
        return Err(DualityError::ZeroDepth);
    }
    if let Some((generator, index)) = check_relatively_prime(g).failing {
        return Err(DualityError::NotRelativelyPrime { generator, index });
    }
    let deltas = lcm_step(g, depth);
    let mut prev = vec![BigInt::one(); g.n];
    let mut matrices = Vec::with_capacity(depth);
    for cur in &deltas {
        let diag: Vec<BigInt> = cur.iter().zip(&prev).map(|(c, p)| c / p).collect();
        matrices.push(IntMatrix::diagonal(&diag));
        prev = cur.clone();
    }
    let coordinates = match &g.generators {
        Generators::List(rows) => {
            let all = lcm_step(g, rows.len());
            let last = all.last().cloned().unwrap_or_else(|| vec![BigInt::one(); g.n]);
            last.iter()
                .map(|d| {
                    let f = factor_counts(d)?;
                    SupernaturalNumber::from_primes(f.into_iter().map(|(p, e)| (p, Exponent::Finite(e))))
                        .map_err(|_| DualityError::Unfactorable)
                })
                .collect::<Result<_, _>>()?
        }
        Generators::Pattern(p) => p
            .numerators
            .iter()
            .zip(&p.bases)
            .map(|(&c, &b)| {
                let mut primes = if c == 0 { vec![] } else { crate::exactnum::primes::factorize(b) };
                primes.dedup();
                SupernaturalNumber::from_primes(primes.into_iter().map(|q| (q, Exponent::Infinite)))
                    .map_err(|_| DualityError::Unfactorable)
            })
            .collect::<Result<_, _>>()?,
    };
    Ok(DualPresentation {
        matrices,
        deltas: IntMatrix::from_rows(deltas).expect("depth ≥ 1"),
        coordinates,
    })
}

/// One inductive step at generator `i`, basis index `j`:
/// `μ·(c_j d / d_j) + ν·d_j = 1` recovers `β_j / d_j`, and
/// `r·(δ_j^i / d_j) + s·(δ_j^i / δ_j^{i−1}) = 1` recovers `β_j / δ_j^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BezoutStep {
    pub generator: usize,
    pub index: usize,
    #[serde(with = "crate::exactnum::int_json")]
    pub mu: BigInt,
    #[serde(with = "crate::exactnum::int_json")]
    pub nu: BigInt,
    #[serde(with = "crate::exactnum::int_json")]
    pub r: BigInt,
    #[serde(with = "crate::exactnum::int_json")]
    pub s: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub depth: usize,
    pub steps: Vec<BezoutStep>,
}

fn bezout(a: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt)> {
    let e = a.extended_gcd(b);
    if e.gcd.is_one() {
        Some((e.x, e.y))
    } else if (-&e.gcd).is_one() {
        Some((-e.x, -e.y))
    } else {
        None
    }
}

fn unit(n: usize, j: usize, x: Rational) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[j] = x;
    v
}

fn combine(terms: &[(BigInt, &[Rational])]) -> Vec<Rational> {
    let n = terms[0].1.len();
    (0..n)
        .map(|k| {
            terms
                .iter()
                .map(|(c, v)| Rational::from_integer(c.clone()) * &v[k])
                .sum()
        })
        .collect()
}

/// Checks to depth `N` that every `β_j / δ_j^i` is an integer combination of
/// the `λ_i` and the `β_j`, and that every `λ_i` is an integer combination of
/// the `β_j / δ_j^i`.
pub fn membership_roundtrip(g: &GroupPresentation, depth: usize) -> Result<RoundtripReport, DualityError> {
    dual_presentation(g, depth)?;
    let n = g.n;
    let deltas = lcm_step(g, depth);
    let mut steps = Vec::new();
    let mut prev = vec![BigInt::one(); n];
    for i in 1..=depth {
        let fail = || DualityError::RoundtripFailure(i);
        let lambda = g.generator(i);
        let ds = g.denominators(i);
        let d: BigInt = ds.iter().product();
        for j in 0..n {
            let dj = &ds[j];
            // x = (d/d_j)·λ_i − Σ_{k≠j} (c_k d / (d_j d_k))·β_k = (c_j d / d_j)·β_j / d_j
            let mut terms: Vec<(BigInt, Vec<Rational>)> = vec![(&d / dj, lambda.clone())];
            for k in (0..n).filter(|&k| k != j) {
                let coeff = Rational::from_integer(&d / dj) * &lambda[k];
                if !coeff.is_integer() {
                    return Err(fail());
                }
                terms.push((-coeff.to_integer(), unit(n, k, Rational::one())));
            }
            let refs: Vec<(BigInt, &[Rational])> = terms.iter().map(|(c, v)| (c.clone(), v.as_slice())).collect();
            let x = combine(&refs);
            let e = lambda[j].numer() * (&d / dj);
            if x != unit(n, j, Rational::new(e.clone(), dj.clone())) {
                return Err(fail());
            }
            let (mu, nu) = bezout(&e, dj).ok_or_else(fail)?;
            let beta_j = unit(n, j, Rational::one());
            let over_d = combine(&[(mu.clone(), &x), (nu.clone(), &beta_j)]);
            if over_d != unit(n, j, Rational::new(BigInt::one(), dj.clone())) {
                return Err(fail());
            }
            let delta = &deltas[i - 1][j];
            let (r, s) = bezout(&(delta / dj), &(delta / &prev[j])).ok_or_else(fail)?;
            let over_prev = unit(n, j, Rational::new(BigInt::one(), prev[j].clone()));
            let over_delta = combine(&[(r.clone(), &over_d), (s.clone(), &over_prev)]);
            if over_delta != unit(n, j, Rational::new(BigInt::one(), delta.clone())) {
                return Err(fail());
            }
            steps.push(BezoutStep {
                generator: i,
                index: j + 1,
                mu,
                nu,
                r,
                s,
            });
        }
        // λ_i = Σ_j (c_j δ_j^i / d_j^i)·(β_j / δ_j^i)
        for (j, c) in lambda.iter().enumerate() {
            if !(c * Rational::from_integer(deltas[i - 1][j].clone())).is_integer() {
                return Err(fail());
            }
        }
        prev = deltas[i - 1].clone();
    }
    Ok(RoundtripReport { depth, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{integer, rational};
    use crate::supernatural::{to_supernatural, PrimeSequenceSpec};

    fn pattern(numerators: &[i64], bases: &[u64]) -> GroupPresentation {
        GroupPresentation::from_pattern(GeneratorPattern {
            numerators: numerators.to_vec(),
            bases: bases.to_vec(),
        })
        .unwrap()
    }

    #[test]
    fn relative_primality() {
        let ok = GroupPresentation::from_list(vec![vec![rational(1, 2), rational(1, 3)]]).unwrap();
        assert!(check_relatively_prime(&ok).relatively_prime);
        let bad = GroupPresentation::from_list(vec![vec![rational(1, 2), rational(1, 4)]]).unwrap();
        assert_eq!(check_relatively_prime(&bad).failing, Some((1, 1)));
        let ints = GroupPresentation::from_list(vec![vec![integer(1), integer(0)], vec![integer(0), integer(1)]]).unwrap();
        assert!(check_relatively_prime(&ints).relatively_prime);
        assert!(matches!(
            dual_presentation(&bad, 2),
            Err(DualityError::NotRelativelyPrime { .. })
        ));
    }

    #[test]
    fn dyadic_and_circle() {
        let g = pattern(&[1, 0], &[2, 1]);
        let d = dual_presentation(&g, 4).unwrap();
        assert!(d.matrices.iter().all(|m| *m == IntMatrix::diagonal(&[2.into(), 1.into()])));
        assert_eq!(d.coordinates[0], SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap());
        assert_eq!(d.coordinates[1], SupernaturalNumber::one());
        assert_eq!(membership_roundtrip(&g, 5).unwrap().steps.len(), 10);
    }

    #[test]
    fn two_and_three() {
        let g = pattern(&[1, 1], &[2, 3]);
        let d = dual_presentation(&g, 5).unwrap();
        assert!(d.matrices.iter().all(|m| *m == IntMatrix::diagonal(&[2.into(), 3.into()])));
        for (j, p) in [(0, 2), (1, 3)] {
            let seq = PrimeSequenceSpec::repeat(vec![p]).unwrap();
            assert_eq!(to_supernatural(&seq), d.coordinates[j]);
        }
        let report = membership_roundtrip(&g, 4).unwrap();
        assert_eq!(report.steps.len(), 8);
    }

    #[test]
    fn basis_generators() {
        let g = GroupPresentation::from_list(vec![vec![integer(1), integer(0)], vec![integer(0), integer(1)]]).unwrap();
        let d = dual_presentation(&g, 3).unwrap();
        assert!(d.matrices.iter().all(|m| *m == IntMatrix::identity(2)));
        assert!(d.coordinates.iter().all(|c| *c == SupernaturalNumber::one()));
        assert!(membership_roundtrip(&g, 3).is_ok());
    }

    #[test]
    fn json_forms() {
        let g: GroupPresentation = serde_json::from_str(r#"{"generators":[["1/2","1/3"],["1/4","1/9"]]}"#).unwrap();
        assert_eq!(g.len(), Some(2));
        let d = dual_presentation(&g, 2).unwrap();
        assert_eq!(d.deltas.row(1), &[BigInt::from(4), BigInt::from(9)]);
        let p: GroupPresentation = serde_json::from_str(r#"{"pattern":{"numerators":[1,1],"bases":[2,3]}}"#).unwrap();
        let back: GroupPresentation = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
