use solenoids::exactnum::rational;
use solenoids::multipliers::{continuity_probe, ProbeVerdict};
use solenoids::supernatural::{Exponent, SupernaturalNumber};

fn main() {
    let dyadic = SupernaturalNumber::from_primes([(2, Exponent::Infinite)]).unwrap();

    for r in [rational(3, 8), rational(1, 3)] {
        let report = continuity_probe(&r, &dyadic, &dyadic, 8);
        match report.verdict {
            ProbeVerdict::ConvergesToIdentity => println!("{r}: converges"),
            ProbeVerdict::StaysBoundedAwayBy { lower_bound } => {
                println!("{r}: stays at least {lower_bound:.4} away (bound {:?})", report.theoretical_bound)
            }
        }
        let head: Vec<String> = report.distances.iter().take(8).map(|d| format!("{d:.4}")).collect();
        println!("  distances: {}", head.join(" "));
    }
}
