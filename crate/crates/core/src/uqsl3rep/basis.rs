use serde::{Deserialize, Serialize};

use crate::exactq::{qbr, qint, qpoch, QScalar};

/// Highest weight `lambda1 * w1 + lambda2 * w2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub lambda1: u32,
    pub lambda2: u32,
}

impl Weight {
    pub fn new(lambda1: u32, lambda2: u32) -> Self {
        Weight { lambda1, lambda2 }
    }

    pub fn dim(&self) -> usize {
        let (a, b) = (self.lambda1 as usize, self.lambda2 as usize);
        (a + 1) * (b + 1) * (a + b + 2) / 2
    }

    fn l1(&self) -> i64 {
        self.lambda1 as i64
    }

    fn l2(&self) -> i64 {
        self.lambda2 as i64
    }

    pub fn contains(&self, idx: BasisIndex) -> bool {
        let (k, l, m) = (idx.k as i64, idx.l as i64, idx.m as i64);
        m <= self.l1() && l <= self.l2() && k <= self.l2() + m - l
    }

    /// All weights with `lambda1 + lambda2 <= n`.
    pub fn all_up_to_sum(n: u32) -> Vec<Weight> {
        (0..=n)
            .flat_map(|a| (0..=n - a).map(move |b| Weight::new(a, b)))
            .collect()
    }

    /// All weights with both entries at most `n`.
    pub fn all_in_box(n: u32) -> Vec<Weight> {
        (0..=n)
            .flat_map(|a| (0..=n).map(move |b| Weight::new(a, b)))
            .collect()
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.lambda1, self.lambda2)
    }
}

/// Label of the basis vector `F2^k F3hat^l F1^m v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex {
    pub k: u32,
    pub l: u32,
    pub m: u32,
}

impl BasisIndex {
    pub fn new(k: u32, l: u32, m: u32) -> Self {
        BasisIndex { k, l, m }
    }

    /// Checked constructor from signed components.
    pub fn try_from_signed(k: i64, l: i64, m: i64) -> Option<Self> {
        if k < 0 || l < 0 || m < 0 {
            None
        } else {
            Some(BasisIndex::new(k as u32, l as u32, m as u32))
        }
    }
}

impl std::fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.k, self.l, self.m)
    }
}

/// Basis labels in ascending lexicographic `(k, l, m)` order.
pub fn enumerate_basis(w: Weight) -> Vec<BasisIndex> {
    let mut out = Vec::with_capacity(w.dim());
    for k in 0..=(w.lambda1 + w.lambda2) {
        for l in 0..=w.lambda2 {
            for m in 0..=w.lambda1 {
                let idx = BasisIndex::new(k, l, m);
                if w.contains(idx) {
                    out.push(idx);
                }
            }
        }
    }
    out
}

/// Closed-form coefficients of the generator actions on the basis.
#[derive(Clone, Copy, Debug)]
pub struct ActionCoeffs {
    pub weight: Weight,
}

impl ActionCoeffs {
    pub fn new(weight: Weight) -> Self {
        ActionCoeffs { weight }
    }

    fn l1(&self) -> i64 {
        self.weight.lambda1 as i64
    }

    fn l2(&self) -> i64 {
        self.weight.lambda2 as i64
    }

    pub fn k1_exponent(&self, k: i64, l: i64, m: i64) -> i64 {
        self.l1() + k - l - 2 * m
    }

    pub fn k2_exponent(&self, k: i64, l: i64, m: i64) -> i64 {
        self.l2() - 2 * k - l + m
    }

    pub fn a(&self, k: i64, l: i64, m: i64) -> QScalar {
        let l2 = self.l2();
        qbr(l2 + m + 1 - k - l) / qbr(l2 + m + 1 - l)
    }

    pub fn b(&self, k: i64, l: i64, m: i64) -> QScalar {
        qbr(k) / qbr(self.l2() + m + 1 - l)
    }

    pub fn eta(&self, k: i64, l: i64, m: i64) -> QScalar {
        qint(k) * qbr(1 - k + self.l2() - l + m) / qbr(1)
    }

    pub fn alpha(&self, _k: i64, l: i64, m: i64) -> QScalar {
        let (l1, l2) = (self.l1(), self.l2());
        qbr(m) * qbr(l1 - m + 1) * qbr(l2 + m + 1) / (qbr(1) * qbr(1) * qbr(l2 + m - l + 1))
    }

    pub fn beta(&self, _k: i64, l: i64, m: i64) -> QScalar {
        let (l1, l2) = (self.l1(), self.l2());
        qbr(l) * qbr(l2 - l + 1) * qbr(l1 + l2 - l + 2) / (qbr(1) * qbr(1) * qbr(l2 + m - l + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error("basis index {idx} is out of range for weight {weight}")]
    IndexOutOfRange { weight: Weight, idx: BasisIndex },
}

fn h_common(w: Weight, idx: BasisIndex) -> Result<QScalar, RepError> {
    if !w.contains(idx) {
        return Err(RepError::IndexOutOfRange { weight: w, idx });
    }
    let (l1, l2) = (w.lambda1 as i64, w.lambda2 as i64);
    let (k, l, m) = (idx.k as i64, idx.l as i64, idx.m as i64);
    let (ku, lu, mu) = (idx.k, idx.l, idx.m);
    let poch = qpoch(2, 2, ku)
        * qpoch(-2 * (l2 - l + m), 2, ku)
        * qpoch(2, 2, mu)
        * qpoch(-2 * l1, 2, mu)
        * qpoch(2, 2, lu)
        * qpoch(-2 * l2, 2, lu)
        * qpoch(-2 * (l2 + 1 + m), 2, lu)
        * qpoch(-2 * (l1 + l2 + 1), 2, lu);
    let denom = (QScalar::one() - QScalar::q_pow(2))
        .pow(2 * (k + 2 * l + m))
        .expect("1 - q^2 is nonzero");
    let sign = if (k + l + m) % 2 == 0 { 1 } else { -1 };
    Ok((poch / denom)
        .scale_int(sign)
        .shift_q(3 * (k + 3 * l + m) - l * (l - 2 * m)))
}

/// Squared norm of a basis vector, with `<v, v> = 1`.
///
/// The `q^(2 l lambda2)` factor carries a positive exponent; with the
/// opposite sign the values disagree with the adjoint computation.
pub fn norm_h(w: Weight, idx: BasisIndex) -> Result<QScalar, RepError> {
    Ok(h_common(w, idx)?.shift_q(2 * idx.l as i64 * w.lambda2 as i64))
}

/// The variant with `q^(-2 l lambda2)`, kept so tests can show it is wrong.
pub fn norm_h_negative_exponent(w: Weight, idx: BasisIndex) -> Result<QScalar, RepError> {
    Ok(h_common(w, idx)?.shift_q(-2 * idx.l as i64 * w.lambda2 as i64))
}
