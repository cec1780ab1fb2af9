use serde::Serialize;

use super::{CoidealError, CoidealParams};
use crate::exactq::{qbr, qfactorial, qint, qpoch, qpoch_at, QScalar};
use crate::uqsl3rep::Weight;

fn q(e: i64) -> QScalar {
    QScalar::q_pow(e)
}

/// Irreducible module of dimension `n + 1` with highest weight `kappa`,
/// described by its ladder coefficients `b_j` and the eigenvalues of
/// `C1`, `C2` on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractIrrep {
    pub kappa: QScalar,
    pub n: u32,
    pub params: CoidealParams,
    pub b: Vec<QScalar>,
    pub eta1: QScalar,
    pub eta2: QScalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbstractIrrepJson {
    pub kappa: String,
    pub n: u32,
    pub b: Vec<String>,
    pub eta1: String,
    pub eta2: String,
}

impl AbstractIrrep {
    pub fn dim(&self) -> usize {
        self.n as usize + 1
    }

    /// Eigenvalues `q^{3j} kappa` of `K` on the model basis.
    pub fn k_weights(&self) -> Vec<QScalar> {
        (0..=self.n as i64)
            .map(|j| self.kappa.shift_q(3 * j))
            .collect()
    }

    pub fn k_weights_distinct(&self) -> bool {
        let w = self.k_weights();
        w.iter()
            .enumerate()
            .all(|(i, a)| w[i + 1..].iter().all(|b| a != b))
    }

    pub fn to_json(&self) -> AbstractIrrepJson {
        AbstractIrrepJson {
            kappa: self.kappa.to_string(),
            n: self.n,
            b: self.b.iter().map(|x| x.to_string()).collect(),
            eta1: self.eta1.to_string(),
            eta2: self.eta2.to_string(),
        }
    }
}

fn check_kappa(kappa: &QScalar) -> Result<(), CoidealError> {
    if kappa.is_zero() {
        Err(CoidealError::ZeroKappa)
    } else {
        Ok(())
    }
}

/// Eigenvalue of `C1` on the module `(kappa, n)`.
pub fn eta1(kappa: &QScalar, n: u32, p: &CoidealParams) -> QScalar {
    let n = n as i64;
    let kinv = kappa.inv().expect("kappa nonzero");
    ((p.c1() * &kinv).shift_q(1) * (QScalar::one() + q(-2 * n - 2))
        - (p.c2() * kappa).shift_q(2 * n))
        / qbr(1)
}

/// Eigenvalue of `C2` on the module `(kappa, n)`.
pub fn eta2(kappa: &QScalar, n: u32, p: &CoidealParams) -> QScalar {
    let n = n as i64;
    let kinv = kappa.inv().expect("kappa nonzero");
    ((p.c2() * kappa).shift_q(-1) * (QScalar::one() + q(2 * n + 2))
        - (p.c1() * &kinv).shift_q(-2 * n))
        / qbr(1)
}

fn bj_closed(kappa: &QScalar, n: u32, j: u32, p: &CoidealParams) -> QScalar {
    let (n, j) = (n as i64, j as i64);
    let kinv = kappa.inv().expect("kappa nonzero");
    let ratio = p.c2() / p.c1();
    let last = QScalar::one() + (ratio * kappa * kappa).shift_q(2 * j + 2 * n - 1);
    (p.c1() * &kinv).shift_q(-2 * n - 1) * qint(j) * (QScalar::one() - q(2 * n - 2 * j + 2)) * last
        / qbr(1)
}

/// `b_j = [j](eta1 + (c2 kappa q^{2j-2} - c1 kappa^-1 q^{1-2j}(1 + q^{2j}))/(q - q^-1))`.
pub fn bj_alternative(kappa: &QScalar, n: u32, j: u32, p: &CoidealParams) -> QScalar {
    let j = j as i64;
    let kinv = kappa.inv().expect("kappa nonzero");
    let tail = ((p.c2() * kappa).shift_q(2 * j - 2)
        - (p.c1() * &kinv).shift_q(1 - 2 * j) * (QScalar::one() + q(2 * j)))
        / qbr(1);
    qint(j) * (eta1(kappa, n, p) + tail)
}

/// `b_0, ..., b_n` generated from the action of `B1` on the ladder,
/// starting at `b_0 = 0`.
pub fn bj_by_recurrence(kappa: &QScalar, n: u32, p: &CoidealParams) -> Vec<QScalar> {
    let e1 = eta1(kappa, n, p);
    let kinv = kappa.inv().expect("kappa nonzero");
    let d = qbr(1);
    let mut out = vec![QScalar::zero()];
    for i in 1..=n as i64 {
        let prev = out.last().unwrap().shift_q(1);
        let next = prev + e1.shift_q(1 - i) + (kappa * p.c2()).shift_q(3 * i - 3) / &d
            - qint(2) * (&kinv * p.c1()).shift_q(3 - 3 * i) / &d;
        out.push(next);
    }
    out
}

/// The module `(kappa, n)`. Fails if some `b_j` with `1 <= j <= n` vanishes,
/// or if the two closed forms for `b_j` disagree.
pub fn abstract_irrep(
    kappa: &QScalar,
    n: u32,
    p: &CoidealParams,
) -> Result<AbstractIrrep, CoidealError> {
    check_kappa(kappa)?;
    let mut b = vec![QScalar::zero()];
    for j in 1..=n {
        let x = bj_closed(kappa, n, j, p);
        let y = bj_alternative(kappa, n, j, p);
        if x != y {
            return Err(CoidealError::FormMismatch {
                j,
                left: x.to_string(),
                right: y.to_string(),
            });
        }
        if x.is_zero() {
            return Err(CoidealError::NonGeneric { j });
        }
        b.push(x);
    }
    Ok(AbstractIrrep {
        kappa: kappa.clone(),
        n,
        params: p.clone(),
        b,
        eta1: eta1(kappa, n, p),
        eta2: eta2(kappa, n, p),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Genericity {
    Generic,
    /// `c2/c1 = -q^s` with `s <= bound`.
    Excluded {
        s: i64,
        bound: i64,
    },
}

impl Genericity {
    pub fn is_generic(&self) -> bool {
        matches!(self, Genericity::Generic)
    }
}

/// Decomposition on `V_w` is guaranteed unless `c2/c1 = -q^s` with
/// `s <= 2 lambda1 + 2 lambda2 + 1`.
pub fn check_genericity(p: &CoidealParams, w: Weight) -> Genericity {
    let bound = 2 * w.lambda1 as i64 + 2 * w.lambda2 as i64 + 1;
    match (p.c2() / p.c1()).as_signed_monomial() {
        Some((-1, s)) if s <= bound => Genericity::Excluded { s, bound },
        _ => Genericity::Generic,
    }
}

/// `<w_k, w_k>` for `k = 0..=n` in the invariant inner product with
/// `<w_0, w_0> = 1`, where `w_k = B2^k w_0`.
pub fn unitarizable_norms(
    kappa: &QScalar,
    n: u32,
    p: &CoidealParams,
) -> Result<Vec<QScalar>, CoidealError> {
    if !p.unitary_real() {
        return Err(CoidealError::NotUnitary);
    }
    check_kappa(kappa)?;
    let ni = n as i64;
    let c1c2 = p.c1() * p.c2();
    let base = (p.c2() / p.c1() * kappa * kappa).shift_q(2 * ni + 1);
    let one_minus_q2 = QScalar::one() - q(2);
    Ok((0..=n)
        .map(|k| {
            let ki = k as i64;
            let pre = c1c2
                .pow(ki)
                .unwrap()
                .shift_q(3 * ki * (ki - 1) / 2 - 2 * ni * ki)
                / one_minus_q2.pow(ki).unwrap();
            pre * qfactorial(k) * qpoch(2 * ni, -2, k) * qpoch_at(&-&base, 2, k)
        })
        .collect())
}

/// Same values via `(-c2)^k q^{3 k(k-1)/2} kappa^k b_1 ... b_k`.
pub fn unitarizable_norms_product(irrep: &AbstractIrrep) -> Vec<QScalar> {
    let mut acc = QScalar::one();
    let mut out = vec![acc.clone()];
    let step = -irrep.params.c2() * &irrep.kappa;
    for k in 1..=irrep.n as i64 {
        acc = acc * &step * &irrep.b[k as usize] * q(3 * (k - 1));
        out.push(acc.clone());
    }
    out
}
