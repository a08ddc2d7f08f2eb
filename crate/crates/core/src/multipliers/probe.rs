//! Numeric check of continuity along the witness sequence
//! `s_n = π_P(p_1⋯p_n) → e_P`: evaluate `r^{P→Q}(s_n)` at finitely many
//! levels and watch whether it approaches `e_Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{is_proper_multiplier, MultiplierReason};
use crate::exactnum::primes::{nth_prime, prime_index};
use crate::exactnum::Rational;
use crate::supernatural::{diagonal_inverse, proper_arrangement, Exponent, SupernaturalNumber};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ProbeVerdict {
    ConvergesToIdentity,
    StaysBoundedAwayBy { lower_bound: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    /// Distance of `r^{P→Q}(s_n)` to the identity for `n = 1, 2, ...`.
    pub distances: Vec<f64>,
    /// `1/(2^{N+1} d)` when the denominator has a prime not dividing `P`.
    pub theoretical_bound: Option<f64>,
    pub bound_holds: Option<bool>,
    pub levels: usize,
}

/// The arranged pair with slots that are 1 in both sequences removed, cut or
/// padded to `len` terms.
fn compressed_terms(p: &SupernaturalNumber, q: &SupernaturalNumber, len: usize) -> (Vec<u64>, Vec<u64>) {
    let max_exc = p
        .exceptions()
        .keys()
        .chain(q.exceptions().keys())
        .filter_map(|&x| prime_index(x))
        .max()
        .unwrap_or(0) as u64;
    let modulus = p.modulus().lcm(&q.modulus()) as u64;
    let diagonals = modulus * len as u64 + max_exc + 2;
    let (mut ps, mut qs) = (Vec::new(), Vec::new());
    let last = diagonals * (diagonals + 1) / 2;
    for s in 1..=last {
        if ps.len() == len {
            break;
        }
        let (k, i) = diagonal_inverse(s);
        let slot = |c: &SupernaturalNumber| {
            if Exponent::Finite(i) <= c.card_at_index(k as usize) {
                nth_prime(k as usize)
            } else {
                1
            }
        };
        let (a, b) = (slot(p), slot(q));
        if a != 1 || b != 1 {
            ps.push(a);
            qs.push(b);
        }
    }
    ps.resize(len, 1);
    qs.resize(len, 1);
    (ps, qs)
}

/// Runs the witness sequence to `4·depth` terms over `2·depth` levels.
///
/// The pair is properly arranged first; slots that are 1 in both sequences
/// are skipped. `ConvergesToIdentity` is reported when the last distance is
/// below `2^{-depth}`, otherwise the smallest distance over the second half
/// of the run is reported as the lower bound.
pub fn continuity_probe(
    r: &Rational,
    p: &SupernaturalNumber,
    q: &SupernaturalNumber,
    depth: usize,
) -> ProbeReport {
    let depth = depth.max(2);
    let terms = 4 * depth;
    let levels = 2 * depth;
    let arranged = proper_arrangement(&[p.clone(), q.clone()]);
    let (ps, qs) = compressed_terms(&arranged[0], &arranged[1], terms);

    let mut q_prefix = vec![BigInt::one()];
    for x in qs.iter().take(levels) {
        let next = q_prefix.last().unwrap() * BigInt::from(*x);
        q_prefix.push(next);
    }

    let mut distances = Vec::with_capacity(terms);
    let mut numer = r.numer().clone();
    for x in &ps {
        numer *= BigInt::from(*x);
        let mut d = 0.0;
        let mut weight = 0.25;
        for prefix in q_prefix.iter().take(levels) {
            let m = r.denom() * prefix;
            let rem = numer.mod_floor(&m);
            let near = std::cmp::min(rem.clone(), &m - &rem);
            if !near.is_zero() {
                d += weight * Rational::new(near, m).to_f64().unwrap_or(0.5);
            }
            weight *= 0.5;
        }
        distances.push(d);
    }

    let threshold = 0.5f64.powi(depth as i32);
    let last = *distances.last().unwrap();
    let verdict = if last < threshold {
        ProbeVerdict::ConvergesToIdentity
    } else {
        let tail = distances[terms / 2..].iter().copied().fold(f64::INFINITY, f64::min);
        ProbeVerdict::StaysBoundedAwayBy { lower_bound: tail }
    };

    let theoretical_bound = match is_proper_multiplier(r, p, q).reason {
        MultiplierReason::BadDenominatorPrime { prime } => {
            let n = ps.iter().rposition(|&x| x % prime == 0).map_or(1, |i| i + 2);
            let d = r.denom().abs().to_f64().unwrap_or(f64::INFINITY);
            Some(1.0 / (2f64.powi(n as i32 + 1) * d))
        }
        _ => None,
    };
    let bound_holds = theoretical_bound.map(|b| match &verdict {
        ProbeVerdict::StaysBoundedAwayBy { lower_bound } => *lower_bound >= b,
        ProbeVerdict::ConvergesToIdentity => false,
    });
    ProbeReport {
        verdict,
        distances,
        theoretical_bound,
        bound_holds,
        levels,
    }
}
