use solenoids::exactnum::{covering_degree, snf, IntMatrix};
use solenoids::products::{bonding_matrices, ProductSolenoid};
use solenoids::supernatural::PrimeSequenceSpec;

fn main() {
    let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]).unwrap();
    let d = snf(&m).unwrap();
    println!("M = {m}");
    println!("invariant factors: {:?}", d.invariant_factors());
    println!("U M V = D holds: {}", d.verify(&m));
    println!("covering degree: {}", covering_degree(&m).unwrap());

    let p = ProductSolenoid::from_specs(vec![
        PrimeSequenceSpec::repeat(vec![2]).unwrap(),
        PrimeSequenceSpec::repeat(vec![3]).unwrap(),
    ])
    .unwrap();
    for (j, b) in bonding_matrices(&p, 3).unwrap().iter().enumerate() {
        println!("level {}: bonding {b}, degree {}", j + 1, covering_degree(b).unwrap());
    }
}
