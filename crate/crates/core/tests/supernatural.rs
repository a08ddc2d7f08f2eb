use proptest::prelude::*;
use solenoids::supernatural::{
    compare, derived_sequence, diagonal_bijection, diagonal_inverse, proper_arrangement, to_supernatural, Exponent,
    OrderRelation, PrimeSequenceSpec, SupernaturalNumber, TailRule,
};

const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        3 => (0u64..=3).prop_map(Exponent::Finite),
        1 => Just(Exponent::Infinite),
    ]
}

fn descriptor() -> impl Strategy<Value = SupernaturalNumber> {
    (
        proptest::collection::vec(exponent(), PRIMES.len()),
        prop_oneof![Just(vec![Exponent::ZERO]), Just(vec![Exponent::ZERO, Exponent::Infinite])],
    )
        .prop_map(|(es, pattern)| SupernaturalNumber::from_parts(pattern, PRIMES.iter().copied().zip(es)).unwrap())
}

fn spec() -> impl Strategy<Value = PrimeSequenceSpec> {
    let term = prop_oneof![(-60i64..=60).prop_filter("nonzero", |x| *x != 0)];
    (
        proptest::collection::vec(term.clone(), 0..6),
        prop_oneof![
            Just(TailRule::AllOnes),
            proptest::collection::vec(term, 1..3).prop_map(|values| TailRule::Repeat { values }),
            (0u64..3, 2u64..4).prop_map(|(r, m)| TailRule::IndexedPrimes { r: r % m, m }),
        ],
    )
        .prop_map(|(head, tail)| PrimeSequenceSpec::new(head, tail).unwrap())
}

proptest! {
    #[test]
    fn compare_is_reflexive(p in descriptor()) {
        prop_assert_eq!(compare(&p, &p).verdict, OrderRelation::Equivalent);
    }

    #[test]
    fn compare_is_transitive(p in descriptor(), q in descriptor(), r in descriptor()) {
        if compare(&p, &q).le() && compare(&q, &r).le() {
            prop_assert!(compare(&p, &r).le());
        }
    }

    #[test]
    fn compare_is_antisymmetric_up_to_equivalence(p in descriptor(), q in descriptor()) {
        let v = compare(&p, &q);
        let w = compare(&q, &p);
        prop_assert_eq!(v.le(), w.ge());
        prop_assert_eq!(v.verdict == OrderRelation::Equivalent, v.le() && v.ge());
    }

    #[test]
    fn derived_sequence_has_the_same_multiplicities(s in spec()) {
        let sn = to_supernatural(&s);
        let short = derived_sequence(&s, 300);
        let long = derived_sequence(&s, 600);
        for p in PRIMES {
            let c = short.iter().filter(|&&x| x == p).count() as u64;
            let c2 = long.iter().filter(|&&x| x == p).count() as u64;
            match sn.card(p) {
                Exponent::Infinite => prop_assert!(c2 > c),
                Exponent::Finite(e) => prop_assert!(c == e && c2 == e),
            }
        }
    }

    #[test]
    fn arrangement_is_idempotent_and_keeps_classes(ps in proptest::collection::vec(descriptor(), 1..4)) {
        let a = proper_arrangement(&ps);
        prop_assert_eq!(proper_arrangement(&a), a.clone());
        for (x, y) in ps.iter().zip(&a) {
            prop_assert_eq!(compare(x, y).verdict, OrderRelation::Equivalent);
        }
    }

    #[test]
    fn diagonal_bijection_inverts(j in 1u64..5_000_000) {
        let (k, i) = diagonal_inverse(j);
        prop_assert_eq!(diagonal_bijection(k, i), j);
    }
}

#[test]
fn signs_do_not_matter() {
    let a = PrimeSequenceSpec::new(vec![-6, 10], TailRule::Repeat { values: vec![-2] }).unwrap();
    let b = PrimeSequenceSpec::new(vec![6, 10], TailRule::Repeat { values: vec![2] }).unwrap();
    assert_eq!(to_supernatural(&a), to_supernatural(&b));
}
