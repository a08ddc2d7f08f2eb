use solenoids::products::{product_isometry_check, ProductSolenoid};
use solenoids::supernatural::{Exponent, SupernaturalNumber};

fn main() {
    let p = ProductSolenoid::new(vec![
        SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap(),
        SupernaturalNumber::from_primes([(3, Exponent::Infinite)]).unwrap(),
        SupernaturalNumber::one(),
    ])
    .unwrap();
    for depth in [4, 8, 16] {
        let r = product_isometry_check(&p, depth).unwrap();
        println!(
            "depth {depth}: holds={} over {} samples, max discrepancy {:.1e} (tolerance {:.1e})",
            r.holds, r.samples, r.max_discrepancy, r.tolerance
        );
    }
}
