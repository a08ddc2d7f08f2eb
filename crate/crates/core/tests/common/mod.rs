#![allow(dead_code)]

use rand::Rng;
use solenoids::exactnum::{integer, rational, Rational, RationalMatrix};
use solenoids::products::ProductSolenoid;
use solenoids::supernatural::{Exponent, PrimeSequenceSpec, SupernaturalNumber};

pub fn dyadic() -> SupernaturalNumber {
    SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap()
}

pub fn dyadic_square() -> ProductSolenoid {
    ProductSolenoid::new(vec![dyadic(), dyadic()]).unwrap()
}

pub fn torus_square() -> ProductSolenoid {
    let ones = PrimeSequenceSpec::ones();
    ProductSolenoid::from_specs(vec![ones.clone(), ones]).unwrap()
}

fn m(rows: [[Rational; 2]; 2]) -> RationalMatrix {
    RationalMatrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect()).unwrap()
}

/// `k / 2^e` with small `k` and `e`.
pub fn dyadic_rational(rng: &mut impl Rng) -> Rational {
    rational(rng.gen_range(-6..=6), 1 << rng.gen_range(0..=3))
}

/// A random word in the generators of the automorphism group of
/// `Σ_{2^∞} × Σ_{2^∞}`: shears by dyadic rationals, halving and doubling a
/// coordinate, the swap and a sign change.
pub fn random_dyadic_automorphism(rng: &mut impl Rng) -> RationalMatrix {
    let (o, z) = (integer(1), integer(0));
    let mut a = RationalMatrix::identity(2);
    for _ in 0..rng.gen_range(1..=5) {
        let g = match rng.gen_range(0..6) {
            0 => m([[o.clone(), dyadic_rational(rng)], [z.clone(), o.clone()]]),
            1 => m([[o.clone(), z.clone()], [dyadic_rational(rng), o.clone()]]),
            2 => m([[rational(1, 2), z.clone()], [z.clone(), o.clone()]]),
            3 => m([[o.clone(), z.clone()], [z.clone(), integer(2)]]),
            4 => m([[z.clone(), o.clone()], [o.clone(), z.clone()]]),
            _ => m([[integer(-1), z.clone()], [z.clone(), o.clone()]]),
        };
        a = a.mul(&g).unwrap();
    }
    a
}

/// A random rational `c/d` with `|c|, d ≤ h`.
pub fn height_rational(rng: &mut impl Rng, h: i64) -> Rational {
    rational(rng.gen_range(-h..=h), rng.gen_range(1..=h))
}
