use solenoids::products::aut_group_form_2d;
use solenoids::supernatural::{to_supernatural, Exponent, PrimeSequenceSpec, SupernaturalNumber};

fn main() {
    let dyadic = SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap();
    let six = SupernaturalNumber::from_primes([(2, Exponent::Infinite), (3, Exponent::Infinite)]).unwrap();
    let odd = to_supernatural(&PrimeSequenceSpec::indexed_primes(1, 2).unwrap());
    let even = to_supernatural(&PrimeSequenceSpec::indexed_primes(0, 2).unwrap());

    for (p, q) in [(&dyadic, &dyadic), (&six, &dyadic), (&dyadic, &six), (&odd, &even)] {
        let form = aut_group_form_2d(p, q);
        println!("{p} x {q}");
        println!("  {:?} / {:?}: {}", form.case, form.shape, form.description);
    }
}
