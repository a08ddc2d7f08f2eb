mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solenoids::exactnum::{integer, rational, Rational, RationalMatrix};
use solenoids::flows::{
    decide_equivalence_2d, is_irrational, rank, transform_frequency, verify_equivalence, EquivalenceVerdict,
    FrequencyVector, SymbolicBasis,
};
use solenoids::products::ProductSolenoid;
use solenoids::supernatural::{Exponent, SupernaturalNumber};

fn basis_rows(n: usize) -> FrequencyVector {
    let labels: Vec<String> = std::iter::once("1".to_string()).chain((1..n).map(|i| format!("x{i}"))).collect();
    FrequencyVector::new(SymbolicBasis::new(labels).unwrap(), RationalMatrix::identity(n)).unwrap()
}

fn random_matrix(rng: &mut impl Rng, n: usize) -> RationalMatrix {
    let rows = (0..n).map(|_| (0..n).map(|_| common::height_rational(rng, 6)).collect()).collect();
    RationalMatrix::from_rows(rows).unwrap()
}

fn six_by_two() -> ProductSolenoid {
    let six = SupernaturalNumber::from_primes([(2, Exponent::Infinite), (3, Exponent::Infinite)]).unwrap();
    ProductSolenoid::new(vec![six, common::dyadic()]).unwrap()
}

/// `[[a, 0], [c, d]]` with `a ∈ ±2^ℤ3^ℤ`, `d ∈ ±2^ℤ` and `c` a {2,3}-fraction.
fn random_lower(rng: &mut impl Rng) -> RationalMatrix {
    let unit = |rng: &mut ChaCha8Rng, primes: &[i64]| {
        let mut u = integer(if rng.gen_bool(0.5) { 1 } else { -1 });
        for &p in primes {
            let e: i32 = rng.gen_range(-2..=2);
            u *= Rational::from_integer(p.into()).pow(e);
        }
        u
    };
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    let a = unit(&mut r, &[2, 3]);
    let d = unit(&mut r, &[2]);
    let c = rational(r.gen_range(-9..=9), [1, 2, 3, 4, 6, 9][r.gen_range(0..6)]);
    RationalMatrix::from_rows(vec![vec![a, integer(0)], vec![c, d]]).unwrap()
}

fn check_equivalent(p: &ProductSolenoid, w: &FrequencyVector, w2: &FrequencyVector) -> Result<(), TestCaseError> {
    match decide_equivalence_2d(p, w, w2).unwrap() {
        EquivalenceVerdict::Equivalent { a_matrix, a } => {
            prop_assert!(verify_equivalence(&a_matrix, &a, p, w, w2).unwrap());
            let back = a_matrix.inverse().unwrap();
            let inv_a = Rational::from_integer(1.into()) / &a;
            prop_assert!(verify_equivalence(&back, &inv_a, p, w2, w).unwrap());
            Ok(())
        }
        other => Err(TestCaseError::fail(format!("{other:?}"))),
    }
}

proptest! {
    #[test]
    fn invertible_maps_keep_independence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_matrix(&mut rng, 3);
        prop_assume!(n.inverse().is_ok());
        let w = transform_frequency(&n, &integer(1), &basis_rows(3)).unwrap();
        prop_assert!(is_irrational(&w).irrational);
    }

    #[test]
    fn transported_flows_are_equivalent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::dyadic_square();
        let a = common::random_dyadic_automorphism(&mut rng);
        let s = common::height_rational(&mut rng, 5);
        prop_assume!(s != integer(0));
        let w = basis_rows(2);
        let w2 = transform_frequency(&a, &s, &w).unwrap();
        check_equivalent(&p, &w, &w2)?;
    }

    #[test]
    fn rational_flows_on_lower_triangular_products(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = six_by_two();
        let q = [common::height_rational(&mut rng, 8), common::height_rational(&mut rng, 8)];
        prop_assume!(q.iter().any(|x| *x != integer(0)));
        let w = FrequencyVector::rational(&q).unwrap();
        let w2 = transform_frequency(&random_lower(&mut rng), &integer(1), &w).unwrap();
        check_equivalent(&p, &w, &w2)?;
    }

    #[test]
    fn verdicts_respect_rank(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = SymbolicBasis::new(["1", "x", "y"]).unwrap();
        let mut row = || (0..3).map(|_| integer(rng.gen_range(-2..=2))).collect::<Vec<_>>();
        let w = FrequencyVector::new(basis.clone(), RationalMatrix::from_rows(vec![row(), row()]).unwrap());
        let w2 = FrequencyVector::new(basis, RationalMatrix::from_rows(vec![row(), row()]).unwrap());
        let (Ok(w), Ok(w2)) = (w, w2) else { return Ok(()) };
        let v = decide_equivalence_2d(&common::dyadic_square(), &w, &w2).unwrap();
        if let EquivalenceVerdict::Equivalent { a_matrix, a } = v {
            prop_assert_eq!(rank(&w), rank(&w2));
            prop_assert!(verify_equivalence(&a_matrix, &a, &common::dyadic_square(), &w, &w2).unwrap());
        }
    }
}
