//! Smith normal form of nonsingular integer matrices.
//!
//! The reduction works on a copy `D` of the input while accumulating the row
//! operations in `U` and the column operations in `V`, so that `U·M·V = D`
//! holds after every step. At stage `t` the pivot is the entry of least
//! nonzero absolute value in the trailing block `D[t.., t..]` (ties go to the
//! lowest row, then the lowest column). Division with remainder clears the
//! pivot row and column; any nonzero remainder is strictly smaller than the
//! pivot, so the next pivot shrinks and the stage terminates. When the pivot
//! does not divide some trailing entry, that entry's row is added to the pivot
//! row and the stage restarts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{IntMatrix, MatrixError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows()).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Checks `U·M·V = D`, diagonal shape, the divisibility chain and
    /// unimodularity of `U` and `V`.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let Ok(um) = self.u.mul(m) else { return false };
        let Ok(umv) = um.mul(&self.v) else { return false };
        if umv != self.d || !self.d.is_diagonal() {
            return false;
        }
        let f = self.invariant_factors();
        let chain = f.windows(2).all(|w| !w[0].is_zero() && (&w[1] % &w[0]).is_zero());
        chain && self.u.is_unimodular() && self.v.is_unimodular()
    }
}

fn pick_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let n = d.rows();
    let mut best: Option<(usize, usize)> = None;
    for i in t..n {
        for j in t..n {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => x.abs() < d.get(bi, bj).abs(),
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}

fn add_row_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    for j in 0..m.cols() {
        let v = m.get(target, j) + factor * m.get(source, j);
        *m.get_mut(target, j) = v;
    }
}

fn add_col_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    for i in 0..m.rows() {
        let v = m.get(i, target) + factor * m.get(i, source);
        *m.get_mut(i, target) = v;
    }
}

pub fn snf(m: &IntMatrix) -> Result<SnfDecomposition, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.det()?.is_zero() {
        return Err(MatrixError::Singular);
    }
    let n = m.rows();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);

    for t in 0..n {
        loop {
            let (pi, pj) = pick_pivot(&d, t).ok_or(MatrixError::Singular)?;
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut cleared = true;
            for i in t + 1..n {
                let q = -d.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    add_row_multiple(&mut d, i, t, &q);
                    add_row_multiple(&mut u, i, t, &q);
                }
                cleared &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = -d.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    add_col_multiple(&mut d, j, t, &q);
                    add_col_multiple(&mut v, j, t, &q);
                }
                cleared &= d.get(t, j).is_zero();
            }
            if !cleared {
                continue;
            }
            let offender = (t + 1..n).find(|&i| {
                (t + 1..n).any(|j| !(d.get(i, j) % &pivot).is_zero())
            });
            match offender {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            let minus = -BigInt::one();
            for j in 0..n {
                *d.get_mut(t, j) = d.get(t, j) * &minus;
                *u.get_mut(t, j) = u.get(t, j) * &minus;
            }
        }
    }
    Ok(SnfDecomposition { u, d, v })
}

/// `|det M|`, the number of sheets of the covering of the `n`-torus induced by `M`.
pub fn covering_degree(m: &IntMatrix) -> Result<BigInt, MatrixError> {
    let det = m.det()?;
    if det.is_zero() {
        Err(MatrixError::Singular)
    } else {
        Ok(det.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntMatrix::identity(2);
        let s = snf(&id).unwrap();
        assert_eq!(s.d, id);
        assert!(s.verify(&id));
    }

    #[test]
    fn jordan_block() {
        let m = mat(&[&[2, 1], &[0, 2]]);
        let s = snf(&m).unwrap();
        assert_eq!(s.d, mat(&[&[1, 0], &[0, 4]]));
        assert!(s.verify(&m));
    }

    #[test]
    fn already_reduced() {
        let m = mat(&[&[6, 0], &[0, 90]]);
        let s = snf(&m).unwrap();
        assert_eq!(s.d, m);
        assert!(s.verify(&m));
    }

    #[test]
    fn non_chain_diagonal_is_repaired() {
        let m = mat(&[&[4, 0], &[0, 6]]);
        let s = snf(&m).unwrap();
        assert_eq!(s.d, mat(&[&[2, 0], &[0, 12]]));
        assert!(s.verify(&m));
    }

    #[test]
    fn errors() {
        assert_eq!(snf(&mat(&[&[1, 2], &[2, 4]])), Err(MatrixError::Singular));
        assert!(matches!(
            snf(&mat(&[&[1, 2, 3]])),
            Err(MatrixError::NonSquare { .. })
        ));
        assert_eq!(covering_degree(&mat(&[&[0, 0], &[0, 1]])), Err(MatrixError::Singular));
    }

    #[test]
    fn degrees() {
        assert_eq!(covering_degree(&IntMatrix::identity(2)).unwrap(), BigInt::from(1));
        assert_eq!(covering_degree(&mat(&[&[2, 1], &[0, 2]])).unwrap(), BigInt::from(4));
        assert_eq!(covering_degree(&mat(&[&[2, 0], &[0, 3]])).unwrap(), BigInt::from(6));
    }
}
