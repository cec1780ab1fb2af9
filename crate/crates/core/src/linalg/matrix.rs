use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::LinalgError;
use crate::exactq::{QError, QScalar};

/// Sparse vector; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QVector {
    dim: usize,
    entries: BTreeMap<usize, QScalar>,
}

impl QVector {
    pub fn zeros(dim: usize) -> Self {
        QVector {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = QVector::zeros(dim);
        v.set(i, QScalar::one());
        v
    }

    pub fn from_dense(xs: Vec<QScalar>) -> Self {
        let mut v = QVector::zeros(xs.len());
        for (i, x) in xs.into_iter().enumerate() {
            v.set(i, x);
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> QScalar {
        self.entries.get(&i).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn get_ref(&self, i: usize) -> Option<&QScalar> {
        self.entries.get(&i)
    }

    pub fn set(&mut self, i: usize, x: QScalar) {
        assert!(i < self.dim, "index {} out of range {}", i, self.dim);
        if x.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
    }

    pub fn add_at(&mut self, i: usize, x: &QScalar) {
        if x.is_zero() {
            return;
        }
        let v = self.get(i) + x;
        self.set(i, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &QScalar)> {
        self.entries.iter().map(|(i, x)| (*i, x))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<QScalar> {
        (0..self.dim).map(|i| self.get(i)).collect()
    }

    pub fn scale(&self, k: &QScalar) -> QVector {
        if k.is_zero() {
            return QVector::zeros(self.dim);
        }
        QVector {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, x)| (*i, x * k)).collect(),
        }
    }

    pub fn add(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (i, x) in other.iter() {
            out.add_at(i, x);
        }
        out
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        self.add(&other.scale(&QScalar::from_int(-1)))
    }

    /// Lowest index with a nonzero entry.
    pub fn first_nonzero(&self) -> Option<(usize, &QScalar)> {
        self.entries.iter().next().map(|(i, x)| (*i, x))
    }

    /// Returns `Some(c)` with `self = c * other`, if such a scalar exists.
    pub fn ratio_to(&self, other: &QVector) -> Option<QScalar> {
        if self.dim != other.dim {
            return None;
        }
        if other.is_zero() {
            return if self.is_zero() {
                Some(QScalar::zero())
            } else {
                None
            };
        }
        let (i0, o0) = other.first_nonzero().unwrap();
        let c = self.get(i0) / o0;
        if other.scale(&c) == *self {
            Some(c)
        } else {
            None
        }
    }
}

/// Sparse row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, QScalar>>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        QMatrix::diag(&vec![QScalar::one(); n])
    }

    pub fn diag(d: &[QScalar]) -> Self {
        let mut m = QMatrix::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn scalar(n: usize, x: &QScalar) -> Self {
        QMatrix::diag(&vec![x.clone(); n])
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, QScalar)>,
    ) -> Self {
        let mut m = QMatrix::zeros(rows, cols);
        for (r, c, x) in entries {
            m.add_at(r, c, &x);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, cols: &[QVector]) -> Self {
        let mut m = QMatrix::zeros(dim, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.dim(), dim);
            for (i, x) in v.iter() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> QScalar {
        self.data[r].get(&c).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, x: QScalar) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({}, {}) out of range",
            r,
            c
        );
        if x.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, x);
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, x: &QScalar) {
        if x.is_zero() {
            return;
        }
        let v = self.get(r, c) + x;
        self.set(r, c, v);
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, QScalar> {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> QVector {
        let mut v = QVector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if let Some(x) = row.get(&c) {
                v.set(r, x.clone());
            }
        }
        v
    }

    /// Triplets `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &QScalar)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, x)| (r, *c, x)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &QScalar)> {
        self.entries().next()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for (r, c, x) in self.entries() {
            t.data[c].insert(r, x.clone());
        }
        t
    }

    fn check_same_shape(&self, other: &QMatrix) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &QMatrix) -> Result<QMatrix, LinalgError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (r, c, x) in other.entries() {
            out.add_at(r, c, x);
        }
        Ok(out)
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        self.try_add(other).unwrap_or_else(|e| panic!("{}", e))
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        self.add(&other.scale(&QScalar::from_int(-1)))
    }

    pub fn scale(&self, k: &QScalar) -> QMatrix {
        if k.is_zero() {
            return QMatrix::zeros(self.rows, self.cols);
        }
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| row.iter().map(|(c, x)| (*c, x * k)).collect())
                .collect(),
        }
    }

    pub fn try_matmul(&self, other: &QMatrix) -> Result<QMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let data: Vec<BTreeMap<usize, QScalar>> = self
            .data
            .par_iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, QScalar> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        let t = a * b;
                        match acc.get_mut(j) {
                            Some(s) => *s += &t,
                            None => {
                                acc.insert(*j, t);
                            }
                        }
                    }
                }
                acc.retain(|_, x| !x.is_zero());
                acc
            })
            .collect();
        Ok(QMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn matmul(&self, other: &QMatrix) -> QMatrix {
        self.try_matmul(other).unwrap_or_else(|e| panic!("{}", e))
    }

    pub fn try_matvec(&self, v: &QVector) -> Result<QVector, LinalgError> {
        if self.cols != v.dim() {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (v.dim(), 1),
            });
        }
        let vals: Vec<QScalar> = self
            .data
            .par_iter()
            .map(|row| {
                let mut s = QScalar::zero();
                for (c, a) in row {
                    if let Some(x) = v.get_ref(*c) {
                        s += &(a * x);
                    }
                }
                s
            })
            .collect();
        Ok(QVector::from_dense(vals))
    }

    pub fn matvec(&self, v: &QVector) -> QVector {
        self.try_matvec(v).unwrap_or_else(|e| panic!("{}", e))
    }

    /// Submatrix on the given row and column index lists.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let col_pos: BTreeMap<usize, usize> =
            cols.iter().enumerate().map(|(j, c)| (*c, j)).collect();
        let mut m = QMatrix::zeros(rows.len(), cols.len());
        for (i, r) in rows.iter().enumerate() {
            for (c, x) in &self.data[*r] {
                if let Some(j) = col_pos.get(c) {
                    m.set(i, *j, x.clone());
                }
            }
        }
        m
    }

    /// First entry (row-major) where `self` and `other` differ.
    pub fn first_difference(&self, other: &QMatrix) -> Option<(usize, usize, QScalar, QScalar)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((self.rows, self.cols, QScalar::zero(), QScalar::zero()));
        }
        for r in 0..self.rows {
            if self.data[r] == other.data[r] {
                continue;
            }
            let mut keys: Vec<usize> = self.data[r]
                .keys()
                .chain(other.data[r].keys())
                .copied()
                .collect();
            keys.sort_unstable();
            keys.dedup();
            for c in keys {
                let (a, b) = (self.get(r, c), other.get(r, c));
                if a != b {
                    return Some((r, c, a, b));
                }
            }
        }
        None
    }

    /// Dense numeric specialisation at `q = q0`.
    pub fn evaluate_at(&self, q0: &BigRational) -> Result<Vec<Vec<BigRational>>, QError> {
        let mut out = vec![vec![BigRational::zero(); self.cols]; self.rows];
        for (r, c, x) in self.entries() {
            out[r][c] = x.evaluate_at(q0)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i64) -> QScalar {
        QScalar::q_pow(e)
    }

    fn sample() -> QMatrix {
        QMatrix::from_triplets(
            2,
            3,
            vec![
                (0, 0, q(1)),
                (0, 2, QScalar::from_int(2)),
                (1, 1, q(-1) + q(1)),
            ],
        )
    }

    #[test]
    fn identity_is_neutral() {
        let a = sample();
        assert_eq!(QMatrix::identity(2).matmul(&a), a);
        assert_eq!(a.matmul(&QMatrix::identity(3)), a);
    }

    #[test]
    fn zero_annihilates() {
        let a = sample();
        assert!(a.matmul(&QMatrix::zeros(3, 4)).is_zero());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = sample();
        assert!(matches!(
            a.try_matmul(&a),
            Err(LinalgError::DimensionMismatch { .. })
        ));
        assert!(a.try_add(&a.transpose()).is_err());
    }

    #[test]
    fn transpose_and_matvec() {
        let a = sample();
        assert_eq!(a.transpose().transpose(), a);
        let v = QVector::from_dense(vec![QScalar::one(), QScalar::one(), q(1)]);
        let w = a.matvec(&v);
        assert_eq!(w.get(0), q(1) + QScalar::from_int(2) * q(1));
        assert_eq!(w.get(1), q(-1) + q(1));
    }

    #[test]
    fn difference_locator() {
        let a = sample();
        let mut b = a.clone();
        b.set(1, 1, q(5));
        let (r, c, x, y) = a.first_difference(&b).unwrap();
        assert_eq!((r, c), (1, 1));
        assert_eq!(x, q(-1) + q(1));
        assert_eq!(y, q(5));
        assert!(a.first_difference(&a).is_none());
    }

    #[test]
    fn ratio_detection() {
        let v = QVector::from_dense(vec![q(1), QScalar::zero(), q(2)]);
        let w = v.scale(&(q(3) + QScalar::one()));
        assert_eq!(w.ratio_to(&v), Some(q(3) + QScalar::one()));
        let mut u = w.clone();
        u.set(1, QScalar::one());
        assert_eq!(u.ratio_to(&v), None);
    }
}
