use serde::{Deserialize, Serialize};

use super::{circle, evaluate_pi, inconsistent_level, metric, Time, TrajectoryError, TruncatedPoint};
use crate::flows::{is_irrational, FrequencyVector};
use crate::products::ProductSolenoid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub target: TruncatedPoint,
    pub epsilon: f64,
    pub found_t: f64,
    pub achieved_distance: f64,
    pub error_bound: f64,
    pub search_effort: u64,
    pub chart_level: usize,
    #[serde(skip)]
    pub samples: Vec<Sample>,
}

impl DensityReport {
    /// `t,distance` rows for every improvement seen during the search.
    pub fn samples_csv(&self) -> String {
        let mut out = String::from("t,distance\n");
        for s in &self.samples {
            out.push_str(&format!("{},{}\n", s.t, s.distance));
        }
        out
    }
}

/// Denominators of the continued fraction convergents of `alpha`, up to the
/// first one above `bound`.
fn convergent_denominators(alpha: f64, bound: f64) -> Vec<u64> {
    let mut qs = vec![0u64, 1];
    let mut x = alpha.rem_euclid(1.0);
    while (*qs.last().unwrap() as f64) <= bound && x > 1e-15 {
        x = 1.0 / x;
        let a = x.floor();
        x -= a;
        let n = qs.len();
        let next = (a as u64).saturating_mul(qs[n - 1]).saturating_add(qs[n - 2]);
        qs.push(next);
        if next == u64::MAX {
            break;
        }
    }
    qs
}

/// Finds `t` with `metric(π(tω), target) < ε`.
///
/// All levels are controlled through one chart level `j*`: matching
/// `x^{j*}` to within `η` moves each earlier level by at most the product of
/// the bonding terms in between, so `η` is chosen to keep that amplified
/// error under `ε/2`, while levels past `j*` contribute under `ε/4`. In the
/// chart the orbit is the straight line `t·ω'` on the torus with
/// `ω'_i = ω_i / (p_1^i ⋯ p_{j*−1}^i)`; fixing `t = (y_1 + k)/ω'_1` leaves an
/// inhomogeneous approximation in `k`.
pub fn density_search(
    p: &ProductSolenoid,
    w: &FrequencyVector,
    target: &TruncatedPoint,
    epsilon: f64,
    budget: u64,
) -> Result<DensityReport, TrajectoryError> {
    if !(epsilon > 0.0) {
        return Err(TrajectoryError::BadEpsilon);
    }
    let verdict = is_irrational(w);
    if let Some(relation) = verdict.relation {
        return Err(TrajectoryError::NotIrrational { relation });
    }
    if target.depth() == 0 || target.dim() != p.dim() || w.dim() != p.dim() {
        return Err(TrajectoryError::ShapeMismatch);
    }
    if let Some(level) = inconsistent_level(p, target)? {
        return Err(TrajectoryError::InconsistentTarget { level });
    }
    let depth = target.depth();
    let chart = depth.min((1.0 / epsilon).log2().ceil().max(0.0) as usize + 1);
    let n = p.dim();
    let terms = p.bonding_terms(depth)?;

    let report = |t: f64, d: f64, err: f64, effort: u64, samples: Vec<Sample>| DensityReport {
        target: target.clone(),
        epsilon,
        found_t: t,
        achieved_distance: d,
        error_bound: err,
        search_effort: effort,
        chart_level: chart,
        samples,
    };
    let verify = |t: f64| -> Result<(f64, f64), TrajectoryError> {
        let x = evaluate_pi(p, &Time::Approx(t), w, depth)?;
        let d = metric(&x, target)?;
        Ok((d.value, x.error_bound + target.error_bound))
    };

    if target.is_identity() {
        let (d, err) = verify(0.0)?;
        return Ok(report(0.0, d, err, 0, vec![Sample { t: 0.0, distance: d }]));
    }

    let mut amplification = 0.0;
    let mut wj = 1.0;
    for j in 0..chart {
        wj *= 0.5;
        let mut wi = 1.0;
        for t in &terms {
            wi *= 0.5;
            let gain: f64 = t[j..chart - 1].iter().map(|x| x.unsigned_abs() as f64).product();
            amplification += wj * wi * gain;
        }
    }
    let eta = epsilon / 2.0 / amplification;

    let omega = w.evaluate()?;
    let chart_omega: Vec<f64> = (0..n)
        .map(|i| omega[i] / terms[i][..chart - 1].iter().map(|&x| x as f64).product::<f64>())
        .collect();
    let y: Vec<f64> = target.levels[chart - 1].iter().map(|c| c.to_f64()).collect();

    let mut samples = Vec::new();
    if n == 1 {
        let t = y[0] / chart_omega[0];
        let (d, err) = verify(t)?;
        samples.push(Sample { t, distance: d });
        return if d < epsilon {
            Ok(report(t, d, err, 1, samples))
        } else {
            Err(TrajectoryError::BudgetExhausted { effort: 1, best: d })
        };
    }

    let alpha: Vec<f64> = chart_omega.iter().map(|x| x / chart_omega[0]).collect();
    let limit = if n == 2 {
        let qs = convergent_denominators(alpha[1], 1.0 / eta);
        let k = qs.len();
        qs[k - 1].saturating_add(qs[k - 2]).min(budget)
    } else {
        budget
    };
    let mut best = f64::INFINITY;
    let mut best_full = f64::INFINITY;
    for k in 0..limit {
        let s = y[0] + k as f64;
        let miss = (1..n).map(|i| circle(s * alpha[i], y[i])).fold(0.0, f64::max);
        if miss < best || miss < eta {
            best = best.min(miss);
            let t = s / chart_omega[0];
            let (d, err) = verify(t)?;
            best_full = best_full.min(d);
            samples.push(Sample { t, distance: d });
            if d < epsilon {
                return Ok(report(t, d, err, k + 1, samples));
            }
        }
    }
    Err(TrajectoryError::BudgetExhausted {
        effort: limit,
        best: best_full,
    })
}

#[cfg(test)]
mod tests {
    use super::super::Coordinate;
    use super::*;
    use crate::flows::{parse_rows, SymbolicBasis};
    use crate::supernatural::PrimeSequenceSpec;

    fn target(levels: &[&[f64]]) -> TruncatedPoint {
        TruncatedPoint {
            levels: levels.iter().map(|l| l.iter().map(|&x| Coordinate::Approx(x)).collect()).collect(),
            error_bound: 0.0,
        }
    }

    fn sqrt2_flow(n: usize) -> FrequencyVector {
        let rows: Vec<Vec<&str>> = match n {
            1 => vec![vec!["0", "1"]],
            _ => vec![vec!["1", "0"], vec!["0", "1"]],
        };
        let refs: Vec<&[&str]> = rows.iter().map(|r| r.as_slice()).collect();
        FrequencyVector::new(SymbolicBasis::new(["1", "sqrt2"]).unwrap(), parse_rows(&refs).unwrap()).unwrap()
    }

    #[test]
    fn circle_half() {
        let p = ProductSolenoid::from_specs(vec![PrimeSequenceSpec::ones()]).unwrap();
        let r = density_search(&p, &sqrt2_flow(1), &target(&[&[0.5]]), 1e-3, 1000).unwrap();
        assert!(((r.found_t * 2f64.sqrt()).rem_euclid(1.0) - 0.5).abs() < 1e-3);
        assert!(r.achieved_distance < 1e-3);
    }

    #[test]
    fn torus_square() {
        let ones = PrimeSequenceSpec::ones();
        let p = ProductSolenoid::from_specs(vec![ones.clone(), ones]).unwrap();
        let r = density_search(&p, &sqrt2_flow(2), &target(&[&[0.5, 0.5]]), 1e-2, 1_000_000).unwrap();
        assert!(r.achieved_distance < 1e-2);
        assert!(!r.samples_csv().is_empty());
    }

    #[test]
    fn deep_target_on_dyadic_pair() {
        let two = PrimeSequenceSpec::repeat(vec![2]).unwrap();
        let three = PrimeSequenceSpec::repeat(vec![3]).unwrap();
        let p = ProductSolenoid::from_specs(vec![two, three]).unwrap();
        let w = sqrt2_flow(2);
        let goal = evaluate_pi(&p, &Time::Approx(-7.3), &w, 8).unwrap();
        let r = density_search(&p, &w, &goal, 1e-2, 10_000_000).unwrap();
        assert!(r.achieved_distance < 1e-2, "{r:?}");
    }

    #[test]
    fn rejects_rational_and_identity() {
        let ones = PrimeSequenceSpec::ones();
        let p = ProductSolenoid::from_specs(vec![ones.clone(), ones]).unwrap();
        let w = FrequencyVector::rational(&[crate::exactnum::integer(1), crate::exactnum::integer(2)]).unwrap();
        assert!(matches!(
            density_search(&p, &w, &target(&[&[0.5, 0.5]]), 1e-2, 10),
            Err(TrajectoryError::NotIrrational { .. })
        ));
        let r = density_search(&p, &sqrt2_flow(2), &TruncatedPoint::identity(2, 3), 1e-3, 10).unwrap();
        assert_eq!((r.found_t, r.achieved_distance), (0.0, 0.0));
    }
}
