use super::number::{Exponent, SupernaturalNumber};
use super::order::compare;
use super::sequence::PrimeSequenceSpec;
use crate::exactnum::primes::nth_prime;

/// `f(k, i) = (k+i-2)(k+i-1)/2 + i`, a bijection `N×N → N` (1-based).
pub fn diagonal_bijection(k: u64, i: u64) -> u64 {
    assert!(k >= 1 && i >= 1, "indices are 1-based");
    let s = k + i - 1;
    (s - 1) * s / 2 + i
}

/// `f⁻¹(j) = (k, i)`.
pub fn diagonal_inverse(j: u64) -> (u64, u64) {
    assert!(j >= 1, "indices are 1-based");
    // smallest s with s(s+1)/2 >= j
    let mut s = (((8.0 * j as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while s * (s + 1) / 2 < j {
        s += 1;
    }
    while s > 1 && (s - 1) * s / 2 >= j {
        s -= 1;
    }
    let i = j - (s - 1) * s / 2;
    (s + 1 - i, i)
}

/// `Π = (2, 3, 2, 5, 3, 2, ...)`: the `j`-th term is the `k`-th prime where
/// `(k, i) = f⁻¹(j)`.
pub fn pi_sequence(n: usize) -> Vec<u64> {
    (1..=n as u64)
        .map(|j| nth_prime(diagonal_inverse(j).0 as usize))
        .collect()
}

/// The canonical sequence with multiplicity function `card`: slot `f(k, i)`
/// holds the `k`-th prime when `i ≤ card_{p_k}` and 1 otherwise.
pub fn slot_terms(card: &SupernaturalNumber, n: usize) -> Vec<u64> {
    (1..=n as u64)
        .map(|s| {
            let (k, i) = diagonal_inverse(s);
            if Exponent::Finite(i) <= card.card_at_index(k as usize) {
                nth_prime(k as usize)
            } else {
                1
            }
        })
        .collect()
}

fn arrange_level(cards: &[Exponent], le: &[Vec<bool>]) -> Vec<Exponent> {
    let n = cards.len();
    let mut out = vec![Exponent::ZERO; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    while !remaining.is_empty() {
        let kappa = remaining.iter().map(|&j| cards[j]).max().unwrap();
        let m = *remaining.iter().find(|&&j| cards[j] == kappa).unwrap();
        remaining.retain(|&j| {
            if j == m || le[m][j] {
                out[j] = kappa;
                false
            } else {
                true
            }
        });
    }
    out
}

/// Multiplicity functions of the proper arrangement of `coords`.
///
/// At each prime the largest remaining multiplicity `κ` is given to the first
/// coordinate `m` attaining it and to every remaining `j` with `P_m ≤ P_j`;
/// the rest are treated the same way until every coordinate is assigned.
pub fn proper_arrangement(coords: &[SupernaturalNumber]) -> Vec<SupernaturalNumber> {
    let n = coords.len();
    let le: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| a == b || compare(&coords[a], &coords[b]).le()).collect())
        .collect();
    SupernaturalNumber::combine(coords, n, |cards| arrange_level(cards, &le))
}

/// First `n` terms of each arranged sequence together with its multiplicity
/// function.
pub fn proper_arrangement_specs(
    specs: &[PrimeSequenceSpec],
    n: usize,
) -> (Vec<Vec<u64>>, Vec<SupernaturalNumber>) {
    let coords: Vec<SupernaturalNumber> = specs.iter().map(SupernaturalNumber::from_spec).collect();
    let arranged = proper_arrangement(&coords);
    let terms = arranged.iter().map(|c| slot_terms(c, n)).collect();
    (terms, arranged)
}

/// Whether arranging leaves the multiplicity functions unchanged.
pub fn is_properly_arranged(coords: &[SupernaturalNumber]) -> bool {
    proper_arrangement(coords) == coords
}
