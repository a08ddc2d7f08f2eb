use solenoids::exactnum::RationalMatrix;
use solenoids::flows::{FrequencyVector, SymbolicBasis};
use solenoids::products::ProductSolenoid;
use solenoids::supernatural::PrimeSequenceSpec;
use solenoids::trajectories::{density_search, evaluate_pi, metric, Coordinate, Time, TruncatedPoint};

fn main() {
    let torus = ProductSolenoid::from_specs(vec![PrimeSequenceSpec::ones(), PrimeSequenceSpec::ones()]).unwrap();
    let w = FrequencyVector::new(SymbolicBasis::new(["1", "sqrt2"]).unwrap(), RationalMatrix::identity(2)).unwrap();
    let target = TruncatedPoint {
        levels: vec![vec![Coordinate::Approx(0.3), Coordinate::Approx(0.71)]],
        error_bound: 0.0,
    };

    for eps in [1e-1, 1e-2, 1e-3] {
        let report = density_search(&torus, &w, &target, eps, 50_000_000).unwrap();
        let x = evaluate_pi(&torus, &Time::Approx(report.found_t), &w, 1).unwrap();
        println!(
            "eps={eps:e}: t={:.3} distance={:.2e} (recomputed {:.2e}) after {} steps",
            report.found_t,
            report.achieved_distance,
            metric(&x, &target).unwrap().value,
            report.search_effort
        );
    }
}
