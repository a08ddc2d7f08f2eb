use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, parse_rational, MatrixError};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RationalMatrix = Matrix<BigRational>;

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if data.len() != rows * cols {
            return Err(MatrixError::Shape {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Ragged);
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self
    where
        T: Clone,
    {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn require_square(&self) -> Result<(), MatrixError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = T::one();
        }
        m
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            *m.get_mut(i, i) = e.clone();
        }
        m
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Dimension {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other.get(k, j).clone();
                    let slot = out.get_mut(i, j);
                    *slot = slot.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn to_rational(&self) -> RationalMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, MatrixError> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    *a.get_mut(i, j) = v;
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }
}

impl RationalMatrix {
    pub fn from_ratio_rows(rows: &[&[(i64, i64)]]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                        .collect()
                })
                .collect(),
        )
    }

    /// `Some` when every entry is an integer.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    pub fn det(&self) -> Result<BigRational, MatrixError> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return Ok(BigRational::zero());
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a.get(k, k).clone();
            det *= &pivot;
            for i in k + 1..n {
                let f = a.get(i, k) / &pivot;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a.get(i, j) - &f * a.get(k, j);
                    *a.get_mut(i, j) = v;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RationalMatrix, MatrixError> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RationalMatrix::identity(n);
        for k in 0..n {
            let p = (k..n)
                .find(|&i| !a.get(i, k).is_zero())
                .ok_or(MatrixError::Singular)?;
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let pivot = a.get(k, k).clone();
            for j in 0..n {
                *a.get_mut(k, j) = a.get(k, j) / &pivot;
                *inv.get_mut(k, j) = inv.get(k, j) / &pivot;
            }
            for i in 0..n {
                if i == k || a.get(i, k).is_zero() {
                    continue;
                }
                let f = a.get(i, k).clone();
                for j in 0..n {
                    *a.get_mut(i, j) = a.get(i, j) - &f * a.get(k, j);
                    *inv.get_mut(i, j) = inv.get(i, j) - &f * inv.get(k, j);
                }
            }
        }
        Ok(inv)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let pivot = a.get(r, c).clone();
            for j in 0..self.cols {
                *a.get_mut(r, j) = a.get(r, j) / &pivot;
            }
            for i in 0..self.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..self.cols {
                    *a.get_mut(i, j) = a.get(i, j) - &f * a.get(r, j);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and a basis of the right kernel `{x : A x = 0}`. Each basis vector
    /// has a 1 in one free column and zeros in the other free columns.
    pub fn kernel_rank(&self) -> (usize, Vec<Vec<BigRational>>) {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f).clone();
                }
                v
            })
            .collect();
        (pivots.len(), basis)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::Dimension {
                left: (self.rows, self.cols),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Integer entries go out as JSON numbers when they fit in an i64 and as
// decimal strings otherwise; both forms are accepted on input.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Num(i64),
    Str(String),
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<IntRepr>> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| match i64::try_from(x) {
                        Ok(v) => IntRepr::Num(v),
                        Err(_) => IntRepr::Str(x.to_string()),
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<IntRepr>> = Vec::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| match x {
                        IntRepr::Num(v) => Ok(BigInt::from(v)),
                        IntRepr::Str(s) => s.trim().parse::<BigInt>().map_err(D::Error::custom),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        IntMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Num(i64),
    Str(String),
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<RatRepr>> = Vec::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| match x {
                        RatRepr::Num(v) => Ok(BigRational::from_integer(v.into())),
                        RatRepr::Str(s) => parse_rational(&s).map_err(D::Error::custom),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        RationalMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_i64_rows(&[&[2, 1, 0], &[1, 3, 4], &[0, 5, 6]]).unwrap();
        // 2(18-20) - 1(6-0) = -10
        assert_eq!(m.det().unwrap(), BigInt::from(-10));
        let z = IntMatrix::from_i64_rows(&[&[0, 1], &[0, 2]]).unwrap();
        assert!(z.det().unwrap().is_zero());
    }

    #[test]
    fn inverse_examples() {
        let id = RationalMatrix::identity(2);
        assert_eq!(id.inverse().unwrap(), id);
        let half = RationalMatrix::from_ratio_rows(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 1)]]).unwrap();
        assert_eq!(
            half.inverse().unwrap(),
            RationalMatrix::from_ratio_rows(&[&[(2, 1), (0, 1)], &[(0, 1), (1, 1)]]).unwrap()
        );
        let shear = RationalMatrix::from_ratio_rows(&[&[(1, 1), (1, 1)], &[(0, 1), (1, 1)]]).unwrap();
        let inv = shear.inverse().unwrap();
        assert_eq!(
            inv,
            RationalMatrix::from_ratio_rows(&[&[(1, 1), (-1, 1)], &[(0, 1), (1, 1)]]).unwrap()
        );
        assert_eq!(shear.mul(&inv).unwrap(), RationalMatrix::identity(2));
    }

    #[test]
    fn singular_inverse_rejected() {
        let m = RationalMatrix::from_ratio_rows(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]).unwrap();
        assert_eq!(m.inverse(), Err(MatrixError::Singular));
        let r = RationalMatrix::from_ratio_rows(&[&[(1, 1), (2, 1)]]).unwrap();
        assert!(matches!(r.inverse(), Err(MatrixError::NonSquare { .. })));
    }

    #[test]
    fn kernel_examples() {
        let id = RationalMatrix::identity(2);
        assert_eq!(id.kernel_rank(), (2, vec![]));
        let row = RationalMatrix::from_ratio_rows(&[&[(1, 1), (2, 1)]]).unwrap();
        assert_eq!(row.kernel_rank(), (1, vec![vec![q(-2, 1), q(1, 1)]]));
        let zero = RationalMatrix::zeros(2, 2);
        let (rank, basis) = zero.kernel_rank();
        assert_eq!(rank, 0);
        assert_eq!(basis, vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]);
    }

    #[test]
    fn json_shapes() {
        let m = RationalMatrix::from_ratio_rows(&[&[(1, 2), (0, 1)], &[(-3, 1), (1, 1)]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["1/2","0"],["-3","1"]]"#);
        let back: RationalMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let mixed: RationalMatrix = serde_json::from_str(r#"[[1,"2/4"]]"#).unwrap();
        assert_eq!(mixed.get(0, 1), &q(1, 2));

        let i: IntMatrix = serde_json::from_str(r#"[[1,"123456789012345678901234567890"]]"#).unwrap();
        assert_eq!(
            serde_json::to_string(&i).unwrap(),
            r#"[[1,"123456789012345678901234567890"]]"#
        );
        assert!(serde_json::from_str::<IntMatrix>("[[1,2],[3]]").is_err());
    }
}
