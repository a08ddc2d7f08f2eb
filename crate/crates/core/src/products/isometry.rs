//! The interleaving map `(⟨x_1^j⟩, …, ⟨x_n^j⟩) ↦ ⟨(x_1^j, …, x_n^j)⟩` from the
//! product of 1-solenoids to the `n`-solenoid, checked numerically to be an
//! isometry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ProductError, ProductSolenoid};

const SAMPLES: usize = 64;
const SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub holds: bool,
    pub samples: usize,
    pub max_discrepancy: f64,
    pub tolerance: f64,
}

/// Circle distance `|u − v|` with representatives chosen `≤ 1/2` apart.
fn circle(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Two random points of the product, as `levels[i][j]` = coordinate `i` at
/// level `j`. Each is built from its deepest level down by `x^j = p_j·x^{j+1}`.
pub fn sample_pair(
    p: &ProductSolenoid,
    depth: usize,
    rng: &mut impl Rng,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>), ProductError> {
    let terms = p.bonding_terms(depth)?;
    let mut point = || -> Vec<Vec<f64>> {
        terms
            .iter()
            .map(|t| {
                let mut col = vec![0.0; depth];
                col[depth - 1] = rng.gen::<f64>();
                for j in (0..depth - 1).rev() {
                    col[j] = (t[j] as f64 * col[j + 1]).rem_euclid(1.0);
                }
                col
            })
            .collect()
    };
    Ok((point(), point()))
}

/// `Σ_i 2^{-i} Σ_j 2^{-j} ‖x_i^j − y_i^j‖`.
pub fn product_distance(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    let mut wi = 1.0;
    let mut total = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        wi /= 2.0;
        let mut wj = 1.0;
        let mut inner = 0.0;
        for (a, b) in xi.iter().zip(yi) {
            wj /= 2.0;
            inner += wj * circle(*a, *b);
        }
        total += wi * inner;
    }
    total
}

/// `Σ_j 2^{-j} Σ_i 2^{-i} ‖x_i^j − y_i^j‖` over the interleaved levels.
pub fn interleaved_distance(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    let depth = x.first().map_or(0, Vec::len);
    let mut wj = 1.0;
    let mut total = 0.0;
    for j in 0..depth {
        wj /= 2.0;
        let mut wi = 1.0;
        let mut inner = 0.0;
        for i in 0..x.len() {
            wi /= 2.0;
            inner += wi * circle(x[i][j], y[i][j]);
        }
        total += wj * inner;
    }
    total
}

pub fn product_isometry_check(p: &ProductSolenoid, depth: usize) -> Result<IsometryReport, ProductError> {
    let depth = depth.max(1);
    let tolerance = 0.5f64.powi(depth as i32);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut max_discrepancy: f64 = 0.0;
    for _ in 0..SAMPLES {
        let (x, y) = sample_pair(p, depth, &mut rng)?;
        let d = (product_distance(&x, &y) - interleaved_distance(&x, &y)).abs();
        max_discrepancy = max_discrepancy.max(d);
        max_discrepancy = max_discrepancy.max(product_distance(&x, &x) + interleaved_distance(&y, &y));
    }
    Ok(IsometryReport {
        holds: max_discrepancy < tolerance,
        samples: SAMPLES,
        max_discrepancy,
        tolerance,
    })
}
