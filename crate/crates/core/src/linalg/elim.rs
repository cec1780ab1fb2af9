use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{LinalgError, QMatrix, QVector};
use crate::exactq::QScalar;

type Row = BTreeMap<usize, QScalar>;

/// Reduced row echelon form of the given rows over Q(q).
///
/// Returns the reduced nonzero rows and their pivot columns. Pivots are
/// chosen per column as the candidate entry with the fewest terms.
pub(crate) fn rref(mut rows: Vec<Row>, ncols: usize) -> (Vec<Row>, Vec<usize>) {
    rows.retain(|r| !r.is_empty());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter_map(|i| rows[i].get(&c).map(|x| (x.size(), i)))
            .min();
        let Some((_, p)) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][&c].inv().expect("pivot is nonzero");
        let prow: Row = rows[r].iter().map(|(j, x)| (*j, x * &inv)).collect();
        rows[r] = prow.clone();
        rows.par_iter_mut().enumerate().for_each(|(i, row)| {
            if i == r {
                return;
            }
            let Some(f) = row.get(&c).cloned() else {
                return;
            };
            for (j, x) in &prow {
                let t = &f * x;
                let v = match row.get(j) {
                    Some(y) => y - &t,
                    None => -t,
                };
                if v.is_zero() {
                    row.remove(j);
                } else {
                    row.insert(*j, v);
                }
            }
        });
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn rows_of(a: &QMatrix) -> Vec<Row> {
    (0..a.rows()).map(|r| a.row(r).clone()).collect()
}

/// Basis of the null space, one vector per free column.
pub fn kernel_basis(a: &QMatrix) -> Vec<QVector> {
    let (rows, pivots) = rref(rows_of(a), a.cols());
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; a.cols()];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    (0..a.cols())
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = QVector::unit(a.cols(), f);
            for (row, &p) in rows.iter().zip(&pivots) {
                if let Some(x) = row.get(&f) {
                    v.set(p, -x);
                }
            }
            v
        })
        .collect()
}

/// Coefficients expressing `target` in the span of `basis`.
pub fn solve_in_span(basis: &[QVector], target: &QVector) -> Result<Vec<QScalar>, LinalgError> {
    let k = basis.len();
    let dim = target.dim();
    if basis.iter().any(|b| b.dim() != dim) {
        return Err(LinalgError::DimensionMismatch {
            left: (dim, k),
            right: (target.dim(), 1),
        });
    }
    let mut cols: Vec<QVector> = basis.to_vec();
    cols.push(target.clone());
    let m = QMatrix::from_columns(dim, &cols);
    let (rows, pivots) = rref(rows_of(&m), k + 1);
    if pivots.last() == Some(&k) {
        return Err(LinalgError::NotInSpan);
    }
    if pivots.len() < k {
        return Err(LinalgError::DependentBasis);
    }
    Ok(rows
        .iter()
        .map(|row| row.get(&k).cloned().unwrap_or_else(QScalar::zero))
        .collect())
}

/// Exact rank by elimination over Q(q).
pub fn rank_exact(a: &QMatrix) -> usize {
    rref(rows_of(a), a.cols()).1.len()
}

fn numeric_rank(mut m: Vec<Vec<BigRational>>, ncols: usize) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        let prow = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot;
            for j in c..ncols {
                if !prow[j].is_zero() {
                    row[j] -= &f * &prow[j];
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Fixed seeded sequence of rationals in (0, 1).
pub fn sample_points(n: usize) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    (0..n)
        .map(|_| {
            let d: i64 = rng.gen_range(101..1000);
            let k: i64 = rng.gen_range(1..d);
            BigRational::new(BigInt::from(k), BigInt::from(d))
        })
        .collect()
}

/// How a rank value was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankRoute {
    /// Full rank at a numeric point; specialisation never raises rank, so
    /// this is a proof.
    NumericFull,
    Exact,
}

pub fn rank_with_route(a: &QMatrix) -> (usize, RankRoute) {
    let full = a.rows().min(a.cols());
    if full == 0 {
        return (0, RankRoute::Exact);
    }
    for q0 in sample_points(3) {
        if let Ok(m) = a.evaluate_at(&q0) {
            if numeric_rank(m, a.cols()) == full {
                return (full, RankRoute::NumericFull);
            }
        }
    }
    (rank_exact(a), RankRoute::Exact)
}

pub fn rank(a: &QMatrix) -> usize {
    rank_with_route(a).0
}

/// `G[i][j] = sum_t w[t] v_i[t] v_j[t]`.
pub fn gram(vectors: &[QVector], weights: &[QScalar]) -> Result<QMatrix, LinalgError> {
    let n = vectors.len();
    for v in vectors {
        if v.dim() != weights.len() {
            return Err(LinalgError::DimensionMismatch {
                left: (v.dim(), 1),
                right: (weights.len(), 1),
            });
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let vals: Vec<(usize, usize, QScalar)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut s = QScalar::zero();
            for (t, x) in vectors[i].iter() {
                if let Some(y) = vectors[j].get_ref(t) {
                    s += &(&weights[t] * &(x * y));
                }
            }
            (i, j, s)
        })
        .collect();
    let mut g = QMatrix::zeros(n, n);
    for (i, j, s) in vals {
        if i != j {
            g.set(j, i, s.clone());
        }
        g.set(i, j, s);
    }
    Ok(g)
}
