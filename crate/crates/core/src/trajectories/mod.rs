//! Points `π(tω)` of a product solenoid at finite depth, the truncated
//! solenoid metric, and a search for orbit times that land near a target.

mod density;

pub use density::{density_search, DensityReport, Sample};

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactnum::{format_rational, parse_rational, Rational};
use crate::flows::{FlowError, FrequencyVector};
use crate::products::{ProductError, ProductSolenoid};

/// Rounding allowance per float operation.
const ULP: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("points have different shapes")]
    ShapeMismatch,
    #[error("frequencies satisfy the integer relation {relation:?}")]
    NotIrrational { relation: Vec<i64> },
    #[error("target is not a solenoid point: level {level} disagrees with level {}", level + 1)]
    InconsistentTarget { level: usize },
    #[error("epsilon must be positive")]
    BadEpsilon,
    #[error("no time found after {effort} candidates; best distance {best}")]
    BudgetExhausted { effort: u64, best: f64 },
}

/// A circle coordinate in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Coordinate {
    Exact(Rational),
    Approx(f64),
}

impl Coordinate {
    pub fn to_f64(&self) -> f64 {
        match self {
            Coordinate::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Coordinate::Approx(x) => *x,
        }
    }
}

impl Serialize for Coordinate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Coordinate::Exact(r) => s.serialize_str(&format_rational(r)),
            Coordinate::Approx(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Coordinate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Num(x) => Coordinate::Approx(x.rem_euclid(1.0)),
            Raw::Str(s) => Coordinate::Exact(frac(&parse_rational(&s).map_err(serde::de::Error::custom)?)),
        })
    }
}

/// A time `t`, exact or floating.
#[derive(Debug, Clone, PartialEq)]
pub enum Time {
    Exact(Rational),
    Approx(f64),
}

impl Time {
    pub fn to_f64(&self) -> f64 {
        match self {
            Time::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Time::Approx(x) => *x,
        }
    }
}

/// `levels[j][i]` is coordinate `i` of `x^{j+1}`. Float coordinates are
/// within `error_bound` of the true value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedPoint {
    pub levels: Vec<Vec<Coordinate>>,
    #[serde(default)]
    pub error_bound: f64,
}

impl TruncatedPoint {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn dim(&self) -> usize {
        self.levels.first().map_or(0, Vec::len)
    }

    pub fn identity(n: usize, depth: usize) -> Self {
        TruncatedPoint {
            levels: vec![vec![Coordinate::Exact(Rational::zero()); n]; depth],
            error_bound: 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.levels.iter().flatten().all(|c| matches!(c, Coordinate::Exact(_)))
    }

    pub fn is_identity(&self) -> bool {
        self.levels.iter().flatten().all(|c| c.to_f64() == 0.0)
    }

    /// The first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Self {
        TruncatedPoint {
            levels: self.levels[..depth.min(self.depth())].to_vec(),
            error_bound: self.error_bound,
        }
    }
}

fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// `x^j_i = t·ω_i / (p_1^i ⋯ p_{j−1}^i) mod 1` for `j = 1..=depth`.
pub fn evaluate_pi(
    p: &ProductSolenoid,
    t: &Time,
    w: &FrequencyVector,
    depth: usize,
) -> Result<TruncatedPoint, TrajectoryError> {
    if depth == 0 {
        return Err(TrajectoryError::ZeroDepth);
    }
    if w.dim() != p.dim() {
        return Err(FlowError::SizeMismatch {
            expected: p.dim(),
            found: w.dim(),
        }
        .into());
    }
    let terms = p.bonding_terms(depth)?;
    if let (Time::Exact(t), Some(exact)) = (t, w.as_rationals()) {
        let mut cur: Vec<Rational> = exact.iter().map(|x| x * t).collect();
        let mut levels = Vec::with_capacity(depth);
        for j in 0..depth {
            levels.push(cur.iter().map(|x| Coordinate::Exact(frac(x))).collect());
            for (i, x) in cur.iter_mut().enumerate() {
                *x = &*x / Rational::from_integer(terms[i][j].into());
            }
        }
        return Ok(TruncatedPoint {
            levels,
            error_bound: 0.0,
        });
    }
    let t = t.to_f64();
    let omega = w.evaluate()?;
    let scale = omega.iter().fold(0.0f64, |m, x| m.max(x.abs())) * t.abs();
    let mut cur: Vec<f64> = omega.iter().map(|x| x * t).collect();
    let mut levels = Vec::with_capacity(depth);
    for j in 0..depth {
        levels.push(cur.iter().map(|x| Coordinate::Approx(x.rem_euclid(1.0))).collect());
        for (i, x) in cur.iter_mut().enumerate() {
            *x /= terms[i][j] as f64;
        }
    }
    Ok(TruncatedPoint {
        levels,
        error_bound: (scale + 1.0) * ULP * (depth as f64 + 1.0),
    })
}

/// A distance together with an upper bound on its error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distance {
    pub value: f64,
    pub error_bound: f64,
}

fn circle(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn check_shape(x: &TruncatedPoint, y: &TruncatedPoint) -> Result<(), TrajectoryError> {
    let ok = x.depth() == y.depth()
        && x.depth() > 0
        && x.levels.iter().chain(&y.levels).all(|l| l.len() == x.dim());
    ok.then_some(()).ok_or(TrajectoryError::ShapeMismatch)
}

/// `Σ_{j ≤ J} 2^{-j} Σ_i 2^{-i} ‖x_i^j − y_i^j‖`; the bound covers the
/// omitted levels and float error in the coordinates.
pub fn metric(x: &TruncatedPoint, y: &TruncatedPoint) -> Result<Distance, TrajectoryError> {
    check_shape(x, y)?;
    let mut value = 0.0;
    let mut wj = 1.0;
    for (lx, ly) in x.levels.iter().zip(&y.levels) {
        wj *= 0.5;
        let mut wi = 1.0;
        for (a, b) in lx.iter().zip(ly) {
            wi *= 0.5;
            value += wj * wi * circle(a.to_f64(), b.to_f64());
        }
    }
    Ok(Distance {
        value,
        error_bound: 0.5f64.powi(x.depth() as i32) + x.error_bound + y.error_bound + ULP,
    })
}

/// The truncated sum exactly, when both points are exact.
pub fn metric_exact(x: &TruncatedPoint, y: &TruncatedPoint) -> Result<Option<Rational>, TrajectoryError> {
    check_shape(x, y)?;
    let half = Rational::new(1.into(), 2.into());
    let mut total = Rational::zero();
    let mut wj = Rational::from_integer(1.into());
    for (lx, ly) in x.levels.iter().zip(&y.levels) {
        wj = &wj * &half;
        let mut wi = Rational::from_integer(1.into());
        for (a, b) in lx.iter().zip(ly) {
            wi = &wi * &half;
            let (Coordinate::Exact(a), Coordinate::Exact(b)) = (a, b) else {
                return Ok(None);
            };
            let d = frac(&(a - b));
            let d = if d > half { Rational::from_integer(1.into()) - d } else { d };
            total += &wj * &wi * d;
        }
    }
    Ok(Some(total))
}

/// First level `j` (1-based) where `p_j^i · x^{j+1}_i ≢ x^j_i`, if any.
pub fn inconsistent_level(p: &ProductSolenoid, x: &TruncatedPoint) -> Result<Option<usize>, TrajectoryError> {
    if x.dim() != p.dim() {
        return Err(TrajectoryError::ShapeMismatch);
    }
    let terms = p.bonding_terms(x.depth())?;
    for j in 0..x.depth().saturating_sub(1) {
        for i in 0..x.dim() {
            let m = terms[i][j];
            let ok = match (&x.levels[j][i], &x.levels[j + 1][i]) {
                (Coordinate::Exact(a), Coordinate::Exact(b)) => frac(&(b * Rational::from_integer(m.into()))) == *a,
                (a, b) => {
                    let tol = (m.unsigned_abs() as f64 + 1.0) * (x.error_bound + ULP) + 1e-9;
                    circle(m as f64 * b.to_f64(), a.to_f64()) <= tol
                }
            };
            if !ok {
                return Ok(Some(j + 1));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{integer, rational};
    use crate::supernatural::PrimeSequenceSpec;

    fn dyadic() -> ProductSolenoid {
        ProductSolenoid::from_specs(vec![PrimeSequenceSpec::repeat(vec![2]).unwrap()]).unwrap()
    }

    fn exact(levels: &[&[Rational]]) -> TruncatedPoint {
        TruncatedPoint {
            levels: levels.iter().map(|l| l.iter().cloned().map(Coordinate::Exact).collect()).collect(),
            error_bound: 0.0,
        }
    }

    #[test]
    fn dyadic_levels() {
        let w = FrequencyVector::rational(&[integer(1)]).unwrap();
        let x = evaluate_pi(&dyadic(), &Time::Exact(integer(1)), &w, 3).unwrap();
        assert_eq!(x, exact(&[&[integer(0)], &[rational(1, 2)], &[rational(1, 4)]]));
        assert_eq!(inconsistent_level(&dyadic(), &x).unwrap(), None);
        let z = evaluate_pi(&dyadic(), &Time::Exact(integer(0)), &w, 3).unwrap();
        assert!(z.is_identity());
    }

    #[test]
    fn metric_examples() {
        let x = exact(&[&[integer(0)]]);
        let y = exact(&[&[rational(1, 2)]]);
        assert_eq!(metric(&x, &x).unwrap().value, 0.0);
        assert_eq!(metric(&x, &y).unwrap().value, 0.125);
        assert_eq!(metric_exact(&x, &y).unwrap(), Some(rational(1, 8)));
        // antipodal everywhere, n = 2, J = 3: (7/8)·(1/2)·(3/4)
        let z: &[Rational] = &[integer(0), integer(0)];
        let h: &[Rational] = &[rational(1, 2), rational(1, 2)];
        let a = exact(&[z; 3]);
        let b = exact(&[h; 3]);
        assert_eq!(metric_exact(&a, &b).unwrap(), Some(rational(21, 64)));
        assert!(metric(&a, &x).is_err());
    }

    #[test]
    fn float_evaluation_is_consistent() {
        let p = ProductSolenoid::from_specs(vec![
            PrimeSequenceSpec::repeat(vec![2]).unwrap(),
            PrimeSequenceSpec::new(vec![6, 1, -90], crate::supernatural::TailRule::AllOnes).unwrap(),
        ])
        .unwrap();
        let w = FrequencyVector::new(
            crate::flows::SymbolicBasis::new(["1", "sqrt2"]).unwrap(),
            crate::flows::parse_rows(&[&["1", "0"], &["0", "1"]]).unwrap(),
        )
        .unwrap();
        let x = evaluate_pi(&p, &Time::Approx(123.456), &w, 6).unwrap();
        assert_eq!(inconsistent_level(&p, &x).unwrap(), None);
        assert!(x.error_bound < 1e-10);
    }

    #[test]
    fn point_json() {
        let text = r#"{"levels":[["1/2", 0.25]]}"#;
        let x: TruncatedPoint = serde_json::from_str(text).unwrap();
        assert_eq!(x.levels[0][0], Coordinate::Exact(rational(1, 2)));
        assert_eq!(x.levels[0][1], Coordinate::Approx(0.25));
    }
}
