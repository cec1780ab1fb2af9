//! The coideal subalgebra generated by `B1`, `B2`, `K^{±1}` and its
//! finite-dimensional irreducible modules.

mod model;

pub use model::{
    abstract_irrep, bj_alternative, bj_by_recurrence, check_genericity, eta1, eta2,
    unitarizable_norms, unitarizable_norms_product, AbstractIrrep, AbstractIrrepJson, Genericity,
};

use crate::exactq::{qbr, qint, QScalar};
use crate::linalg::QMatrix;
use crate::report::Report;
use crate::uqsl3rep::{Gen, RepSpace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoidealError {
    #[error("coideal parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("highest weight kappa must be nonzero")]
    ZeroKappa,
    #[error("non-generic parameters: b_{j} vanishes")]
    NonGeneric { j: u32 },
    #[error("closed forms for b_{j} disagree: {left} vs {right}")]
    FormMismatch { j: u32, left: String, right: String },
    #[error("norms need c1 c2 = q^3")]
    NotUnitary,
}

/// Parameters `(c1, c2)`, both nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoidealParams {
    c1: QScalar,
    c2: QScalar,
}

impl CoidealParams {
    pub fn new(c1: QScalar, c2: QScalar) -> Result<Self, CoidealError> {
        if c1.is_zero() {
            return Err(CoidealError::ZeroParameter("c1"));
        }
        if c2.is_zero() {
            return Err(CoidealError::ZeroParameter("c2"));
        }
        Ok(CoidealParams { c1, c2 })
    }

    pub fn c1(&self) -> &QScalar {
        &self.c1
    }

    pub fn c2(&self) -> &QScalar {
        &self.c2
    }

    /// Set iff `c1 c2 = q^3`.
    pub fn unitary_real(&self) -> bool {
        &self.c1 * &self.c2 == QScalar::q_pow(3)
    }
}

impl Default for CoidealParams {
    /// `(q^2, q)`.
    fn default() -> Self {
        CoidealParams {
            c1: QScalar::q_pow(2),
            c2: QScalar::q(),
        }
    }
}

/// Matrices of the coideal generators and Cartan elements on a module.
#[derive(Clone, Debug)]
pub struct CoidealOps<'a> {
    pub rep: &'a RepSpace,
    pub params: CoidealParams,
    pub b1: QMatrix,
    pub b2: QMatrix,
    pub k: QMatrix,
    pub kinv: QMatrix,
    pub c1: QMatrix,
    pub c2: QMatrix,
}

pub fn coideal_matrices<'a>(rep: &'a RepSpace, p: &CoidealParams) -> CoidealOps<'a> {
    let m = |g: Gen| rep.gen(g);
    let b1 = m(Gen::F1).sub(&m(Gen::E2).matmul(m(Gen::K1inv)).scale(p.c1()));
    let b2 = m(Gen::F2).sub(&m(Gen::E1).matmul(m(Gen::K2inv)).scale(p.c2()));
    let k = m(Gen::K1).matmul(m(Gen::K2inv));
    let kinv = m(Gen::K1inv).matmul(m(Gen::K2));
    let d_inv = QScalar::one() / qbr(1);
    let q2 = qint(2);
    let b12 = b1.matmul(&b2);
    let b21 = b2.matmul(&b1);
    let q = QScalar::q();
    let c1 = b12
        .sub(&b21.scale(&q))
        .sub(&k.scale(&(p.c2() * &d_inv)))
        .add(&kinv.scale(&(&q2 * p.c1() * &d_inv)));
    let c2 = b21
        .sub(&b12.scale(&q))
        .sub(&kinv.scale(&(p.c1() * &d_inv)))
        .add(&k.scale(&(&q2 * p.c2() * &d_inv)));
    CoidealOps {
        rep,
        params: p.clone(),
        b1,
        b2,
        k,
        kinv,
        c1,
        c2,
    }
}

impl<'a> CoidealOps<'a> {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Replaces `C1` by `C1 + 1`; the q-commutation with `B1` then fails.
    pub fn inject_c1_shift(&mut self) {
        self.c1 = self.c1.add(&QMatrix::identity(self.dim()));
    }
}

/// Serre relations, commutation relations of the Cartan elements and, when
/// `c1 c2 = q^3`, compatibility with the invariant form.
pub fn verify_coideal_relations(ops: &CoidealOps) -> Report {
    let mut r = Report::new();
    let n = ops.dim();
    let zero = QMatrix::zeros(n, n);
    let (b1, b2, k, kinv) = (&ops.b1, &ops.b2, &ops.k, &ops.kinv);
    let (c1p, c2p) = (ops.params.c1(), ops.params.c2());
    let q = |e: i64| QScalar::q_pow(e);
    let two = qint(2);

    r.matrices_equal("K K^-1 = 1", &k.matmul(kinv), &QMatrix::identity(n));
    let serre = |x: &QMatrix, y: &QMatrix| {
        let xx = x.matmul(x);
        xx.matmul(y)
            .sub(&x.matmul(y).matmul(x).scale(&two))
            .add(&y.matmul(&xx))
    };
    let rhs1 = k
        .scale(&(q(1) * c2p))
        .add(&kinv.scale(&(q(-2) * c1p)))
        .matmul(b1)
        .scale(&two);
    r.matrices_equal(
        "B1^2 B2 - [2] B1 B2 B1 + B2 B1^2 = [2](q c2 K + q^-2 c1 K^-1) B1",
        &serre(b1, b2),
        &rhs1,
    );
    let rhs2 = kinv
        .scale(&(q(1) * c1p))
        .add(&k.scale(&(q(-2) * c2p)))
        .matmul(b2)
        .scale(&two);
    r.matrices_equal(
        "B2^2 B1 - [2] B2 B1 B2 + B1 B2^2 = [2](q c1 K^-1 + q^-2 c2 K) B2",
        &serre(b2, b1),
        &rhs2,
    );

    let (cc1, cc2) = (&ops.c1, &ops.c2);
    r.matrices_equal("C1 C2 = C2 C1", &cc1.matmul(cc2), &cc2.matmul(cc1));
    r.matrices_equal("K C1 = C1 K", &k.matmul(cc1), &cc1.matmul(k));
    r.matrices_equal("K C2 = C2 K", &k.matmul(cc2), &cc2.matmul(k));
    let qcomm = |name: &str, x: &QMatrix, y: &QMatrix, e: i64, r: &mut Report| {
        r.matrices_equal(name, &x.matmul(y).sub(&y.matmul(x).scale(&q(e))), &zero);
    };
    qcomm("K B1 = q^-3 B1 K", k, b1, -3, &mut r);
    qcomm("K B2 = q^3 B2 K", k, b2, 3, &mut r);
    qcomm("C1 B1 = q B1 C1", cc1, b1, 1, &mut r);
    qcomm("C1 B2 = q^-1 B2 C1", cc1, b2, -1, &mut r);
    qcomm("C2 B1 = q^-1 B1 C2", cc2, b1, -1, &mut r);
    qcomm("C2 B2 = q B2 C2", cc2, b2, 1, &mut r);

    if ops.params.unitary_real() {
        let d = ops.rep.norm_matrix();
        r.matrices_equal(
            "B1^T D = -c1 D K^-1 B2",
            &b1.transpose().matmul(&d),
            &d.matmul(&kinv.matmul(b2)).scale(&-c1p),
        );
        r.matrices_equal(
            "B2^T D = -c2 D K B1",
            &b2.transpose().matmul(&d),
            &d.matmul(&k.matmul(b1)).scale(&-c2p),
        );
        r.matrices_equal("C1^T D = D C1", &cc1.transpose().matmul(&d), &d.matmul(cc1));
    } else {
        r.note("star compatibility skipped: c1 c2 != q^3");
    }
    r
}

/// The 3x3 matrix of `C1` on `V_(1,0)` in the basis `v, F1 v, F2 F1 v`,
/// as printed in the worked example with its `x1` read as `c1`.
pub fn fundamental_c1_reference(p: &CoidealParams) -> QMatrix {
    let (c1, c2) = (p.c1(), p.c2());
    let q = |e: i64| QScalar::q_pow(e);
    let d2 = q(2) - QScalar::one();
    let mut m = QMatrix::zeros(3, 3);
    m.set(0, 0, (c1 * q(2) + c1 - q(1) * c2) / (q(1) * &d2));
    m.set(0, 2, -(c1 * c2));
    m.set(1, 1, (c1 * q(4) + c1 - q(1) * c2) / &d2);
    m.set(2, 0, -q(1));
    m.set(2, 2, (c1 * q(4) + c1 - q(3) * c2) / (q(1) * &d2));
    m
}

/// Entry-by-entry comparison of `C1` on `V_(1,0)` with the printed matrix.
pub fn compare_fundamental_c1(ops: &CoidealOps) -> Report {
    let mut r = Report::new();
    let want = fundamental_c1_reference(&ops.params);
    if ops.dim() != 3 {
        r.push(
            "C1 on V_(1,0) is 3x3",
            false,
            format!("dimension {}", ops.dim()),
        );
        return r;
    }
    for i in 0..3 {
        for j in 0..3 {
            r.scalars_equal(
                format!("C1[{}][{}] matches printed entry", i, j),
                &ops.c1.get(i, j),
                &want.get(i, j),
            );
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uqsl3rep::Weight;

    fn q(e: i64) -> QScalar {
        QScalar::q_pow(e)
    }

    fn params(c1: QScalar, c2: QScalar) -> CoidealParams {
        CoidealParams::new(c1, c2).unwrap()
    }

    #[test]
    fn zero_parameter_rejected() {
        assert_eq!(
            CoidealParams::new(QScalar::zero(), q(1)),
            Err(CoidealError::ZeroParameter("c1"))
        );
    }

    #[test]
    fn default_is_unitary() {
        assert!(CoidealParams::default().unitary_real());
        assert!(!params(q(0), q(0)).unitary_real());
    }

    #[test]
    fn fundamental_c1_matches_printed_matrix() {
        let rep = RepSpace::new(Weight::new(1, 0));
        for p in [
            CoidealParams::default(),
            params(q(0), q(0)),
            params(q(3), QScalar::from_int(-2)),
        ] {
            let ops = coideal_matrices(&rep, &p);
            let r = compare_fundamental_c1(&ops);
            assert!(r.all_passed(), "{}", r);
        }
    }

    #[test]
    fn trivial_module() {
        let rep = RepSpace::new(Weight::new(0, 0));
        let p = CoidealParams::default();
        let ops = coideal_matrices(&rep, &p);
        assert!(ops.b1.is_zero() && ops.b2.is_zero());
        assert!(ops.k.get(0, 0).is_one());
        let want = (-p.c2() + (q(1) + q(-1)) * p.c1()) / (q(1) - q(-1));
        assert_eq!(ops.c1.get(0, 0), want);
    }

    #[test]
    fn relations_hold_on_small_modules() {
        for w in [
            Weight::new(1, 0),
            Weight::new(0, 1),
            Weight::new(1, 1),
            Weight::new(2, 1),
        ] {
            let rep = RepSpace::new(w);
            for p in [
                CoidealParams::default(),
                params(q(0), q(0)),
                params(q(3), q(0)),
            ] {
                let r = verify_coideal_relations(&coideal_matrices(&rep, &p));
                assert!(r.all_passed(), "{} {:?}\n{}", w, p, r);
            }
        }
    }

    #[test]
    fn star_checks_only_when_unitary() {
        let rep = RepSpace::new(Weight::new(1, 1));
        let on = verify_coideal_relations(&coideal_matrices(&rep, &CoidealParams::default()));
        assert_eq!(on.passed_named("C1^T D = D C1"), Some(true));
        let off = verify_coideal_relations(&coideal_matrices(&rep, &params(q(0), q(0))));
        assert_eq!(off.passed_named("C1^T D = D C1"), None);
        assert!(off.all_passed());
    }

    #[test]
    fn shifted_c1_breaks_q_commutation_only() {
        let rep = RepSpace::new(Weight::new(1, 1));
        let mut ops = coideal_matrices(&rep, &CoidealParams::default());
        ops.inject_c1_shift();
        let r = verify_coideal_relations(&ops);
        assert_eq!(r.passed_named("C1 C2 = C2 C1"), Some(true));
        assert_eq!(r.passed_named("C1 B1 = q B1 C1"), Some(false));
    }
}
