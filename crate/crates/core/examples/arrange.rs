use solenoids::supernatural::{
    diagonal_bijection, diagonal_inverse, pi_sequence, proper_arrangement, slot_terms, Exponent,
    SupernaturalNumber,
};

fn main() {
    println!("Π: {:?}", pi_sequence(12));
    for j in [1, 2, 3, 10, 100] {
        let (k, i) = diagonal_inverse(j);
        println!("f^-1({j}) = ({k}, {i}), f back = {}", diagonal_bijection(k, i));
    }

    let pair = [
        SupernaturalNumber::from_primes([(2, Exponent::Finite(3))]).unwrap(),
        SupernaturalNumber::from_primes([(2, Exponent::Finite(1)), (3, Exponent::Infinite)]).unwrap(),
    ];
    for (before, after) in pair.iter().zip(proper_arrangement(&pair)) {
        println!("{before} -> {after}: {:?}", slot_terms(&after, 12));
    }
}
