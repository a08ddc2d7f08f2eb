use solenoids::exactnum::RationalMatrix;
use solenoids::products::{bonding_matrices, is_automorphism, ProductSolenoid};
use solenoids::supernatural::{Exponent, SupernaturalNumber};

fn main() {
    let dyadic = SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap();
    let p = ProductSolenoid::new(vec![dyadic.clone(), dyadic]).unwrap();
    println!("bonding matrices: {:?}", bonding_matrices(&p, 3).unwrap());

    let candidates = [
        RationalMatrix::from_ratio_rows(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 1)]]).unwrap(),
        RationalMatrix::from_ratio_rows(&[&[(1, 1), (1, 4)], &[(0, 1), (2, 1)]]).unwrap(),
        RationalMatrix::from_ratio_rows(&[&[(1, 3), (0, 1)], &[(0, 1), (1, 1)]]).unwrap(),
        RationalMatrix::from_ratio_rows(&[&[(3, 1), (0, 1)], &[(0, 1), (1, 1)]]).unwrap(),
        RationalMatrix::from_ratio_rows(&[&[(1, 1), (2, 1)], &[(1, 2), (1, 1)]]).unwrap(),
    ];
    for a in &candidates {
        let v = is_automorphism(a, &p).unwrap();
        println!("{a} -> automorphism={} singular={} failing={:?}", v.is_automorphism, v.singular, v.failing_entry);
    }
}
