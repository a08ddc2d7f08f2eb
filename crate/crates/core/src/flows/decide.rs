//! Equivalence of linear flows on `Σ_P × Σ_Q`.
//!
//! `Φ^ω` and `Φ^{ω'}` are equivalent iff `a·ω' = A·ω` for an automorphism `A`
//! and a real `a ≠ 0`. Write `W`, `W'` for the coordinate matrices over the
//! formal basis. When `ω` has rank 2 the scalar is forced to be rational and
//! `A = s·C` where `W' = C·W`; the admissible `s` are cut out prime by prime
//! by valuation bounds. When `ω = q ⊗ u` has rank 1 the question becomes
//! whether some automorphism sends the line of `q` to the line of `q'`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{rank, FlowError, FrequencyVector};
use crate::exactnum::{prime_support, rational_valuation, Rational, RationalMatrix};
use crate::products::{aut_group_form_2d, ProductError, ProductSolenoid, Shape2D};
use crate::supernatural::{compare, SupernaturalNumber};

/// Number of primes tried when a coordinate has infinitely many divisors.
const UNIT_PRIMES: usize = 400;
/// Largest unit subgroup enumerated modulo the bad denominator.
const UNIT_GROUP_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    RankMismatch {
        rank: usize,
        rank_prime: usize,
    },
    /// Row `row` (1-based) of `ω'` is not a rational combination of `ω`.
    RowSpaceMismatch { row: usize, label: String },
    /// Position `(i, j)` (1-based) must vanish in every automorphism.
    ZeroPattern { i: usize, j: usize },
    /// No valuation `v_p(s)` lies in `[lower, upper]`.
    Valuation { prime: u64, lower: i64, upper: i64 },
    /// `q_i = 0` but `q'_i ≠ 0`, or the other way round.
    SupportMismatch { index: usize },
    /// The ratio of the two slopes has a prime dividing neither coordinate.
    RatioPrime { prime: u64 },
    /// No unit `u` solves `x ≡ u·y (mod modulus)`.
    Congruence { modulus: String, x: String, y: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UndecidedReason {
    /// `a·ω' = A·ω` has solutions only with `a = σ·u/u'`, irrational for
    /// independent symbols.
    IrrationalScale { sigma: String, u: String, u_prime: String },
    /// Units generated by the first primes dividing `P` did not solve the
    /// congruence modulo `modulus`.
    UnitSearchExhausted { modulus: String },
    Unfactorable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum EquivalenceVerdict {
    Equivalent {
        #[serde(rename = "A")]
        a_matrix: RationalMatrix,
        #[serde(with = "crate::exactnum::rational_string")]
        a: Rational,
    },
    NotEquivalent { obstruction: Obstruction },
    Undecided { reason: UndecidedReason },
}

enum Search<T> {
    Found(T),
    Impossible(Obstruction),
    Unknown(UndecidedReason),
}

fn not_equivalent(o: Obstruction) -> EquivalenceVerdict {
    EquivalenceVerdict::NotEquivalent { obstruction: o }
}

pub fn decide_equivalence_2d(
    p: &ProductSolenoid,
    w: &FrequencyVector,
    w2: &FrequencyVector,
) -> Result<EquivalenceVerdict, FlowError> {
    if p.dim() != 2 {
        return Err(FlowError::SizeMismatch {
            expected: 2,
            found: p.dim(),
        });
    }
    w.same_basis(w2)?;
    if w.dim() != 2 {
        return Err(FlowError::SizeMismatch {
            expected: 2,
            found: w.dim(),
        });
    }
    if !p.is_properly_arranged() {
        return Err(ProductError::NotProperlyArranged.into());
    }
    let coords = p.coordinates();
    let (r, r2) = (rank(w), rank(w2));
    if r != r2 {
        return Ok(not_equivalent(Obstruction::RankMismatch {
            rank: r,
            rank_prime: r2,
        }));
    }
    if r == 2 {
        let c = match solve_left(w.coords(), w2.coords()) {
            Ok(c) => c,
            Err((row, col)) => {
                return Ok(not_equivalent(Obstruction::RowSpaceMismatch {
                    row: row + 1,
                    label: w.basis().labels()[col].clone(),
                }))
            }
        };
        return Ok(match admissible_scale(&c, coords) {
            Search::Found(s) => EquivalenceVerdict::Equivalent {
                a_matrix: c.scale(&s),
                a: s,
            },
            Search::Impossible(o) => not_equivalent(o),
            Search::Unknown(u) => EquivalenceVerdict::Undecided { reason: u },
        });
    }

    let (q, u) = split_rank_one(w.coords());
    let (q2, u2) = split_rank_one(w2.coords());
    let mu = parallel(&u, &u2);
    Ok(match line_map(&q, &q2, &coords[0], &coords[1]) {
        Search::Impossible(o) => not_equivalent(o),
        Search::Unknown(u) => EquivalenceVerdict::Undecided { reason: u },
        Search::Found((a_matrix, sigma)) => match mu {
            Some(mu) => EquivalenceVerdict::Equivalent {
                a_matrix,
                a: sigma / mu,
            },
            None => EquivalenceVerdict::Undecided {
                reason: UndecidedReason::IrrationalScale {
                    sigma: crate::exactnum::format_rational(&sigma),
                    u: row_string(&u, w),
                    u_prime: row_string(&u2, w),
                },
            },
        },
    })
}

fn row_string(u: &[Rational], w: &FrequencyVector) -> String {
    let m = RationalMatrix::from_rows(vec![u.to_vec()]).expect("nonempty row");
    FrequencyVector::new(w.basis().clone(), m)
        .map(|f| f.to_string())
        .unwrap_or_default()
}

/// `C` with `C·W = W'` for `W` of full row rank, or the first mismatching
/// `(row, column)`.
fn solve_left(wm: &RationalMatrix, w2: &RationalMatrix) -> Result<RationalMatrix, (usize, usize)> {
    let (_, pivots) = wm.rref();
    let pick = |m: &RationalMatrix| {
        RationalMatrix::from_rows(
            (0..m.rows())
                .map(|i| pivots.iter().map(|&j| m.get(i, j).clone()).collect())
                .collect(),
        )
        .expect("rectangular")
    };
    let s = pick(wm);
    let c = pick(w2).mul(&s.inverse().expect("pivot columns are independent")).expect("shapes agree");
    let cw = c.mul(wm).expect("shapes agree");
    for i in 0..cw.rows() {
        for j in 0..cw.cols() {
            if cw.get(i, j) != w2.get(i, j) {
                return Err((i, j));
            }
        }
    }
    Ok(c)
}

/// `W = q ⊗ u` with `u` the first nonzero row.
fn split_rank_one(wm: &RationalMatrix) -> (Vec<Rational>, Vec<Rational>) {
    let i0 = (0..wm.rows())
        .find(|&i| wm.row(i).iter().any(|x| !x.is_zero()))
        .expect("nonzero vector");
    let u = wm.row(i0).to_vec();
    let b = u.iter().position(|x| !x.is_zero()).unwrap();
    let q = (0..wm.rows()).map(|i| wm.get(i, b) / &u[b]).collect();
    (q, u)
}

/// `μ` with `u' = μ·u`.
fn parallel(u: &[Rational], u2: &[Rational]) -> Option<Rational> {
    let b = u.iter().position(|x| !x.is_zero())?;
    let mu = &u2[b] / &u[b];
    u.iter().zip(u2).all(|(x, y)| &(x * &mu) == y).then_some(mu)
}

fn support(r: &Rational) -> Option<Vec<u64>> {
    let mut s = prime_support(r.numer())?;
    s.extend(prime_support(r.denom())?);
    s.sort_unstable();
    s.dedup();
    Some(s)
}

fn prime_power(p: u64, e: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(p));
    if e >= 0 {
        base.pow(e as i32)
    } else {
        Rational::one() / base.pow((-e) as i32)
    }
}

/// Rational `s > 0` such that `s·C` is an automorphism, chosen with every
/// valuation as close to 0 as the bounds allow.
fn admissible_scale(c: &RationalMatrix, coords: &[SupernaturalNumber]) -> Search<Rational> {
    let inv = c.inverse().expect("rank two");
    let n = c.rows();
    let mut primes = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let allowed = i == j || compare(&coords[j], &coords[i]).ge();
            for m in [c, &inv] {
                let x = m.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if !allowed {
                    return Search::Impossible(Obstruction::ZeroPattern { i: i + 1, j: j + 1 });
                }
                match support(x) {
                    Some(s) => primes.extend(s),
                    None => return Search::Unknown(UndecidedReason::Unfactorable),
                }
            }
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut s = Rational::one();
    for ell in primes {
        let mut lower: Option<i64> = None;
        let mut upper: Option<i64> = None;
        for i in 0..n {
            for j in 0..n {
                if coords[j].divides(ell) {
                    continue;
                }
                let x = c.get(i, j);
                if !x.is_zero() {
                    let b = -rational_valuation(x, ell);
                    lower = Some(lower.map_or(b, |l| l.max(b)));
                }
                let y = inv.get(i, j);
                if !y.is_zero() {
                    let b = rational_valuation(y, ell);
                    upper = Some(upper.map_or(b, |u| u.min(b)));
                }
            }
        }
        let (lo, hi) = (lower.unwrap_or(i64::MIN), upper.unwrap_or(i64::MAX));
        if lo > hi {
            return Search::Impossible(Obstruction::Valuation {
                prime: ell,
                lower: lo,
                upper: hi,
            });
        }
        s *= prime_power(ell, 0i64.clamp(lo, hi));
    }
    Search::Found(s)
}

fn primitive(q: &[Rational]) -> (Vec<BigInt>, Rational) {
    let l = q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = q.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let v = ints.iter().map(|x| x / &g).collect();
    // q = lambda * v
    (v, Rational::new(g, l))
}

/// Unimodular matrix with first column `v` (primitive).
fn complete_basis(v: &[BigInt]) -> RationalMatrix {
    let e = v[0].extended_gcd(&v[1]);
    // v0*x + v1*y = 1, so [[v0, -y], [v1, x]] has determinant 1
    let to_r = |b: &BigInt| Rational::from_integer(b.clone());
    RationalMatrix::from_rows(vec![
        vec![to_r(&v[0]), to_r(&-&e.y)],
        vec![to_r(&v[1]), to_r(&e.x)],
    ])
    .expect("2x2")
}

/// An automorphism `A` and `σ ≠ 0` with `A·q = σ·q'`.
fn line_map(
    q: &[Rational],
    q2: &[Rational],
    p: &SupernaturalNumber,
    r: &SupernaturalNumber,
) -> Search<(RationalMatrix, Rational)> {
    let form = aut_group_form_2d(p, r);
    match form.shape {
        Shape2D::Full => {
            let (v, lambda) = primitive(q);
            let (v2, lambda2) = primitive(q2);
            let b = complete_basis(&v);
            let b2 = complete_basis(&v2);
            let a = b2.mul(&b.inverse().expect("unimodular")).expect("2x2");
            Search::Found((a, lambda / lambda2))
        }
        Shape2D::Diagonal => diagonal_map(q, q2, p, r),
        Shape2D::LowerTriangular => lower_map(q, q2, p),
        Shape2D::UpperTriangular => {
            let sw = |x: &[Rational]| vec![x[1].clone(), x[0].clone()];
            match lower_map(&sw(q), &sw(q2), r) {
                Search::Found((a, sigma)) => {
                    let j = RationalMatrix::from_rows(vec![
                        vec![Rational::zero(), Rational::one()],
                        vec![Rational::one(), Rational::zero()],
                    ])
                    .expect("2x2");
                    Search::Found((j.mul(&a).unwrap().mul(&j).unwrap(), sigma))
                }
                Search::Impossible(Obstruction::SupportMismatch { index }) => {
                    Search::Impossible(Obstruction::SupportMismatch { index: 3 - index })
                }
                other => other,
            }
        }
    }
}

fn support_mismatch(q: &[Rational], q2: &[Rational]) -> Option<Obstruction> {
    (0..2)
        .find(|&i| q[i].is_zero() != q2[i].is_zero())
        .map(|i| Obstruction::SupportMismatch { index: i + 1 })
}

fn single_support(q: &[Rational], q2: &[Rational]) -> Option<Rational> {
    (0..2)
        .find(|&i| q[1 - i].is_zero())
        .map(|i| &q[i] / &q2[i])
}

fn diagonal_map(
    q: &[Rational],
    q2: &[Rational],
    p: &SupernaturalNumber,
    r: &SupernaturalNumber,
) -> Search<(RationalMatrix, Rational)> {
    if let Some(o) = support_mismatch(q, q2) {
        return Search::Impossible(o);
    }
    if let Some(sigma) = single_support(q, q2) {
        return Search::Found((RationalMatrix::identity(2), sigma));
    }
    let rho = (&q2[0] * &q[1]) / (&q[0] * &q2[1]);
    let Some(primes) = support(&rho) else {
        return Search::Unknown(UndecidedReason::Unfactorable);
    };
    let mut alpha = Rational::from_integer(rho.signum().to_integer());
    let mut delta = Rational::one();
    for ell in primes {
        let v = rational_valuation(&rho, ell);
        if p.divides(ell) {
            alpha *= prime_power(ell, v);
        } else if r.divides(ell) {
            delta *= prime_power(ell, -v);
        } else {
            return Search::Impossible(Obstruction::RatioPrime { prime: ell });
        }
    }
    let sigma = &alpha * &q[0] / &q2[0];
    let a = RationalMatrix::from_rows(vec![
        vec![alpha, Rational::zero()],
        vec![Rational::zero(), delta],
    ])
    .expect("2x2");
    Search::Found((a, sigma))
}

/// Removes from `n` every prime factor dividing `p`.
fn bad_part(n: &BigInt, p: &SupernaturalNumber) -> Option<BigInt> {
    let mut out = n.abs();
    for ell in prime_support(n)? {
        if p.divides(ell) {
            let b = BigInt::from(ell);
            while (&out % &b).is_zero() {
                out /= &b;
            }
        }
    }
    Some(out)
}

/// `D·x mod D` for `x ∈ (1/D)·ℤ[1/S]`, where `D` is prime to `S`.
fn reduce(x: &Rational, d: &BigInt, p: &SupernaturalNumber) -> Option<BigInt> {
    let bad = bad_part(x.denom(), p)?;
    let good = x.denom() / &bad;
    let num = (d / &bad) * x.numer();
    let inv = mod_inverse(&good, d)?;
    Some((num * inv).mod_floor(d))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// `P > Q`: `A = [[α, 0], [γ, δ]]`. With `X = q'_2/q'_1` and `Y = q_2/q_1`
/// this reduces to a unit `u ∈ ±⟨primes dividing P⟩` with `X − u·Y` having
/// no denominator primes outside `P`; then `α = 1/u`, `δ = 1`,
/// `γ = X/u − Y`.
fn lower_map(q: &[Rational], q2: &[Rational], p: &SupernaturalNumber) -> Search<(RationalMatrix, Rational)> {
    if q[0].is_zero() != q2[0].is_zero() {
        return Search::Impossible(Obstruction::SupportMismatch { index: 1 });
    }
    if q[0].is_zero() {
        return Search::Found((RationalMatrix::identity(2), &q[1] / &q2[1]));
    }
    let x = &q2[1] / &q2[0];
    let y = &q[1] / &q[0];
    let (Some(dx), Some(dy)) = (bad_part(x.denom(), p), bad_part(y.denom(), p)) else {
        return Search::Unknown(UndecidedReason::Unfactorable);
    };
    let d = dx.lcm(&dy);
    let u = if d.is_one() {
        Rational::one()
    } else {
        let (Some(xr), Some(yr)) = (reduce(&x, &d, p), reduce(&y, &d, p)) else {
            return Search::Unknown(UndecidedReason::Unfactorable);
        };
        let (gens, complete) = match p.finite_divisor_set() {
            Some(s) => (s, true),
            None => (p.divisors_among_first(UNIT_PRIMES), false),
        };
        match unit_search(&xr, &yr, &d, &gens) {
            UnitSearch::Found(u) => u,
            UnitSearch::Exhausted if complete => {
                return Search::Impossible(Obstruction::Congruence {
                    modulus: d.to_string(),
                    x: xr.to_string(),
                    y: yr.to_string(),
                })
            }
            _ => {
                return Search::Unknown(UndecidedReason::UnitSearchExhausted {
                    modulus: d.to_string(),
                })
            }
        }
    };
    let alpha = Rational::one() / &u;
    let gamma = &x / &u - &y;
    let sigma = &alpha * &q[0] / &q2[0];
    let a = RationalMatrix::from_rows(vec![
        vec![alpha, Rational::zero()],
        vec![gamma, Rational::one()],
    ])
    .expect("2x2");
    Search::Found((a, sigma))
}

enum UnitSearch {
    Found(Rational),
    Exhausted,
    TooLarge,
}

/// Breadth-first walk of the subgroup of `(ℤ/d)^×` generated by `-1` and
/// `gens`, looking for `u` with `x ≡ u·y`.
fn unit_search(x: &BigInt, y: &BigInt, d: &BigInt, gens: &[u64]) -> UnitSearch {
    let Some(dm) = d.to_u64() else {
        return UnitSearch::TooLarge;
    };
    let (x, y) = (x.to_u64().unwrap(), y.to_u64().unwrap());
    let mut gen_res: Vec<(i64, u64)> = vec![(-1, dm - 1)];
    gen_res.extend(gens.iter().map(|&g| (g as i64, g % dm)));
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % dm as u128) as u64;
    let mut parent: HashMap<u64, (u64, usize)> = HashMap::new();
    let mut queue = VecDeque::from([1 % dm]);
    parent.insert(1 % dm, (u64::MAX, 0));
    while let Some(cur) = queue.pop_front() {
        if mulmod(cur, y) == x % dm {
            let mut u = Rational::one();
            let mut at = cur;
            while let Some(&(prev, g)) = parent.get(&at) {
                if prev == u64::MAX {
                    break;
                }
                u *= Rational::from_integer(BigInt::from(gen_res[g].0));
                at = prev;
            }
            return UnitSearch::Found(u);
        }
        for (gi, &(_, g)) in gen_res.iter().enumerate() {
            let next = mulmod(cur, g);
            if !parent.contains_key(&next) {
                if parent.len() >= UNIT_GROUP_LIMIT {
                    return UnitSearch::TooLarge;
                }
                parent.insert(next, (cur, gi));
                queue.push_back(next);
            }
        }
    }
    UnitSearch::Exhausted
}
