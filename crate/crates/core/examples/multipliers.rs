use solenoids::exactnum::rational;
use solenoids::multipliers::{compose, is_iso_multiplier, is_proper_multiplier, ScalarMorphism};
use solenoids::supernatural::{Exponent, SupernaturalNumber};

fn main() {
    let dyadic = SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap();
    let six = SupernaturalNumber::from_primes([(2, Exponent::Infinite), (3, Exponent::Infinite)]).unwrap();

    for r in [rational(3, 4), rational(1, 3), rational(5, 1)] {
        for (p, q) in [(&dyadic, &dyadic), (&six, &dyadic), (&dyadic, &six)] {
            let v = is_proper_multiplier(&r, p, q);
            println!("{r} : {p} -> {q}  proper={} ({:?})", v.proper, v.reason);
        }
    }
    for r in [rational(2, 1), rational(1, 6), rational(3, 1)] {
        println!("{r} iso on {six}: {}", is_iso_multiplier(&r, &six).unwrap());
    }

    let f = ScalarMorphism::new(rational(1, 3), six.clone(), dyadic.clone()).unwrap();
    let g = ScalarMorphism::new(rational(3, 2), six.clone(), six.clone()).unwrap();
    let h = compose(&f, &g).unwrap();
    println!("(1/3) after (3/2) = {} : {} -> {}", h.r(), h.source(), h.target());
}
