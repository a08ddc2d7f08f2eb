use solenoids::supernatural::{compare, derived_sequence, to_supernatural, PrimeSequenceSpec, TailRule};

fn main() {
    let six = PrimeSequenceSpec::new(vec![6, 1, -90], TailRule::AllOnes).unwrap();
    println!("derived (6, 1, -90): {:?}", derived_sequence(&six, 7));

    let dyadic = to_supernatural(&PrimeSequenceSpec::repeat(vec![2]).unwrap());
    let six_adic = to_supernatural(&PrimeSequenceSpec::repeat(vec![6]).unwrap());
    let odd = to_supernatural(&PrimeSequenceSpec::indexed_primes(1, 2).unwrap());
    let even = to_supernatural(&PrimeSequenceSpec::indexed_primes(0, 2).unwrap());

    for (p, q) in [(&dyadic, &six_adic), (&six_adic, &dyadic), (&odd, &even), (&dyadic, &dyadic)] {
        let v = compare(p, q);
        println!("{p}  vs  {q}: {:?}", v.verdict);
    }
}
