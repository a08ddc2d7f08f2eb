use solenoids::exactnum::rational;
use solenoids::flows::{
    decide_equivalence_2d, is_irrational, parse_rows, verify_equivalence, EquivalenceVerdict, FrequencyVector,
    SymbolicBasis,
};
use solenoids::products::ProductSolenoid;
use solenoids::supernatural::{Exponent, SupernaturalNumber};

fn main() {
    let dyadic = SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap();
    let p = ProductSolenoid::new(vec![dyadic.clone(), dyadic]).unwrap();

    let basis = SymbolicBasis::new(["1", "sqrt2", "sqrt3"]).unwrap();
    let w_sqrt2 = FrequencyVector::new(basis.clone(), parse_rows(&[&["1", "0", "0"], &["0", "1", "0"]]).unwrap()).unwrap();
    let w_sqrt3 = FrequencyVector::new(basis.clone(), parse_rows(&[&["1", "0", "0"], &["0", "0", "1"]]).unwrap()).unwrap();
    let w_scaled = FrequencyVector::new(basis, parse_rows(&[&["0", "1/4", "0"], &["1/2", "0", "0"]]).unwrap()).unwrap();
    let w_rational = FrequencyVector::rational(&[rational(1, 1), rational(2, 3)]).unwrap();
    let w_other = FrequencyVector::rational(&[rational(5, 1), rational(-1, 7)]).unwrap();

    println!("{w_sqrt2}: irrational={}", is_irrational(&w_sqrt2).irrational);
    println!("{w_rational}: irrational={}", is_irrational(&w_rational).irrational);

    for (a, b) in [(&w_sqrt2, &w_sqrt3), (&w_sqrt2, &w_scaled), (&w_rational, &w_other)] {
        let verdict = decide_equivalence_2d(&p, a, b).unwrap();
        print!("{a}  ~  {b}: ");
        match &verdict {
            EquivalenceVerdict::Equivalent { a_matrix, a: scale } => {
                let ok = verify_equivalence(a_matrix, scale, &p, a, b).unwrap();
                println!("equivalent via A = {a_matrix}, a = {scale} (verified: {ok})");
            }
            other => println!("{}", serde_json::to_string(other).unwrap()),
        }
    }
}
