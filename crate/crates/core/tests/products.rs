mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use solenoids::exactnum::{rational, RationalMatrix};
use solenoids::products::{aut_group_form_2d, is_automorphism, product_isometry_check, Case2D, ProductSolenoid};
use solenoids::supernatural::{Exponent, PrimeSequenceSpec, SupernaturalNumber};

fn descriptor() -> impl Strategy<Value = SupernaturalNumber> {
    let e = prop_oneof![(0u64..=2).prop_map(Exponent::Finite), Just(Exponent::Infinite)];
    proptest::collection::vec(e, 3)
        .prop_map(|es| SupernaturalNumber::from_primes([2, 3, 5].into_iter().zip(es)).unwrap())
}

fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
    proptest::collection::vec((-4i64..=4, prop_oneof![Just(1i64), Just(2), Just(3), Just(4)]), 4).prop_map(|v| {
        RationalMatrix::from_rows(v.chunks(2).map(|r| r.iter().map(|&(c, d)| rational(c, d)).collect()).collect())
            .unwrap()
    })
}

proptest! {
    #[test]
    fn automorphisms_are_closed(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::dyadic_square();
        let a = common::random_dyadic_automorphism(&mut rng);
        let b = common::random_dyadic_automorphism(&mut rng);
        prop_assert!(is_automorphism(&a, &p).unwrap().is_automorphism);
        prop_assert!(is_automorphism(&a.mul(&b).unwrap(), &p).unwrap().is_automorphism);
        prop_assert!(is_automorphism(&a.inverse().unwrap(), &p).unwrap().is_automorphism);
    }

    #[test]
    fn torus_automorphisms_are_unimodular(a in small_matrix()) {
        let v = is_automorphism(&a, &common::torus_square()).unwrap();
        let unimodular = a.to_integer().is_some_and(|m| m.is_unimodular());
        prop_assert_eq!(v.is_automorphism, unimodular);
    }

    #[test]
    fn diagonal_classes_are_equal(p in descriptor()) {
        prop_assert_eq!(aut_group_form_2d(&p, &p).case, Case2D::Equal);
    }

    #[test]
    fn form_agrees_with_membership(p in descriptor(), q in descriptor(), a in small_matrix()) {
        let prod = ProductSolenoid::new(vec![p.clone(), q.clone()]).unwrap().arranged();
        let c = prod.coordinates();
        let form = aut_group_form_2d(&c[0], &c[1]);
        if is_automorphism(&a, &prod).unwrap().is_automorphism {
            prop_assert!(form.admits_zero_pattern(&a));
        }
    }
}

#[test]
fn isometry_on_small_products() {
    let specs = [vec![2], vec![3], vec![6, 1], vec![1]];
    for a in &specs {
        for b in &specs {
            let p = ProductSolenoid::from_specs(vec![
                PrimeSequenceSpec::repeat(a.clone()).unwrap(),
                PrimeSequenceSpec::repeat(b.clone()).unwrap(),
            ])
            .unwrap();
            assert!(product_isometry_check(&p, 10).unwrap().holds);
        }
    }
}
