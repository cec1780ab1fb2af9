use rayon::prelude::*;
use serde::Serialize;

use super::krawtchouk::dual_q_krawtchouk_r;
use super::layer::{
    c1_on_kernel, kernel_gamma, layer_sparsity, tridiagonal_c1, verify_kernel, verify_tridiagonal,
    KernelBasis,
};
use super::BranchError;
use crate::coideal::{
    abstract_irrep, check_genericity, coideal_matrices, eta1, CoidealOps, CoidealParams, Genericity,
};
use crate::exactq::{qpoch, QScalar};
use crate::linalg::{rank_exact, rank_with_route, QMatrix, QVector, RankRoute};
use crate::report::Report;
use crate::uqsl3rep::{RepSpace, Weight};

fn q(e: i64) -> QScalar {
    QScalar::q_pow(e)
}

/// Highest weight vector `psi^i_x` of the component `(q^{kappa_exponent}, n)`.
#[derive(Clone, Debug)]
pub struct HWVector {
    pub i: u32,
    pub x: u32,
    /// Coefficients of `u_0, ..., u_lambda2`; the first is 1.
    pub coords_in_u: Vec<QScalar>,
    pub coords_ambient: QVector,
    pub kappa_exponent: i64,
    pub n: u32,
    pub eta1: QScalar,
}

pub fn kappa_exponent(w: Weight, i: u32) -> i64 {
    w.lambda1 as i64 - w.lambda2 as i64 - 3 * i as i64
}

/// The parameter `c` of the polynomials attached to layer `i`.
pub fn krawtchouk_c(w: Weight, p: &CoidealParams, i: u32) -> QScalar {
    -(p.c2() / p.c1()).shift_q(2 * w.lambda1 as i64 - 2 * i as i64 + 1)
}

/// Coefficients of `u_l` in the eigenvector `psi^i_x`.
pub fn psi_coefficients(w: Weight, p: &CoidealParams, i: u32, x: u32) -> Vec<QScalar> {
    let (l1, l2, ii) = (w.lambda1 as i64, w.lambda2 as i64, i as i64);
    let c = krawtchouk_c(w, p, i);
    let one = QScalar::one();
    let om = |e: i64| &one - q(e);
    let c2inv = p.c2().inv().expect("c2 nonzero");
    let r = super::krawtchouk::dual_q_krawtchouk_all(w.lambda2, x, &c, w.lambda2);
    debug_assert_eq!(
        r[w.lambda2 as usize],
        dual_q_krawtchouk_r(w.lambda2, x, &c, w.lambda2)
    );
    (0..=l2)
        .map(|l| {
            let lu = l as u32;
            let num = c2inv
                .pow(l)
                .unwrap()
                .shift_q(l * (2 * l2 - l1 + 2 * ii) - l * (l + 1) / 2)
                * om(2).pow(2 * l).unwrap()
                * om(2 * (l1 + l2 + 1 - l));
            let den = qpoch(2, 2, lu)
                * om(2 * (l1 + l2 + 1))
                * qpoch(2 * (l2 + ii + 1 - l), 2, lu)
                * qpoch(-2 * l2, 2, lu);
            num * &r[l as usize] / den
        })
        .collect()
}

fn hw_from_kernel(kb: &KernelBasis, w: Weight, p: &CoidealParams, x: u32) -> HWVector {
    let i = kb.i;
    let coords = psi_coefficients(w, p, i, x);
    let mut amb = QVector::zeros(kb.u[0].dim());
    for (cf, u) in coords.iter().zip(&kb.u) {
        amb = amb.add(&u.scale(cf));
    }
    let ke = kappa_exponent(w, i);
    HWVector {
        i,
        x,
        coords_in_u: coords,
        coords_ambient: amb,
        kappa_exponent: ke,
        n: i + x,
        eta1: eta1(&q(ke), i + x, p),
    }
}

fn require_generic(p: &CoidealParams, w: Weight) -> Result<(), BranchError> {
    match check_genericity(p, w) {
        Genericity::Generic => Ok(()),
        Genericity::Excluded { s, bound } => Err(BranchError::NonGeneric { s, bound }),
    }
}

pub fn highest_weight_vector(
    rep: &RepSpace,
    p: &CoidealParams,
    i: u32,
    x: u32,
) -> Result<HWVector, BranchError> {
    let w = rep.weight();
    require_generic(p, w)?;
    if x > w.lambda2 {
        return Err(BranchError::XOutOfRange {
            x,
            lambda2: w.lambda2,
        });
    }
    let kb = kernel_gamma(rep, p, i)?;
    Ok(hw_from_kernel(&kb, w, p, x))
}

/// Null vector of the tridiagonal block minus `eta`, normalised at `u_0`,
/// or the index where forward substitution breaks down.
pub fn forward_substitution(
    coeffs: &[Vec<QScalar>],
    eta: &QScalar,
) -> Result<Vec<QScalar>, String> {
    let width = coeffs.len();
    let mut p = vec![QScalar::one()];
    for l in 0..width - 1 {
        let mut t = (eta - &coeffs[l][l]) * &p[l];
        if l >= 1 {
            t = t - &coeffs[l - 1][l] * &p[l - 1];
        }
        let div = &coeffs[l + 1][l];
        if div.is_zero() {
            return Err(format!("vanishing lower coefficient at {}", l + 1));
        }
        p.push(t / div);
    }
    for s in 0..width {
        let mut acc = -(eta * &p[s]);
        for (n, row) in coeffs.iter().enumerate() {
            acc = acc + &row[s] * &p[n];
        }
        if !acc.is_zero() {
            return Err(format!("nonzero residual at u_{}", s));
        }
    }
    Ok(p)
}

/// `B1 psi = 0`, `C1 psi = eta1 psi`, and agreement with forward substitution.
pub fn verify_hw(ops: &CoidealOps, hw: &HWVector, coeffs: &[Vec<QScalar>]) -> Report {
    let mut r = Report::new();
    let psi = &hw.coords_ambient;
    let zero = QVector::zeros(psi.dim());
    r.vectors_equal("b1_kernel", &ops.b1.matvec(psi), &zero);
    r.vectors_equal("c1_eigen", &ops.c1.matvec(psi), &psi.scale(&hw.eta1));
    match forward_substitution(coeffs, &hw.eta1) {
        Ok(p) => {
            let bad = p.iter().zip(&hw.coords_in_u).position(|(a, b)| a != b);
            r.push(
                "forward_substitution",
                bad.is_none(),
                bad.map(|l| format!("coefficient of u_{}", l))
                    .unwrap_or_default(),
            );
        }
        Err(e) => r.push("forward_substitution", false, e),
    }
    r
}

/// One irreducible summand `(q^{kappa_exponent}, n)`.
#[derive(Clone, Debug)]
pub struct Component {
    pub i: u32,
    pub x: u32,
    pub kappa_exponent: i64,
    pub n: u32,
    pub hw: HWVector,
    /// `B2^j psi` for `j = 0..=n`.
    pub module: Vec<QVector>,
    /// `B1 B2^j psi = ladder[j] B2^(j-1) psi`; entry 0 is 0, `None` if not a multiple.
    pub ladder: Vec<Option<QScalar>>,
    pub expected_b: Vec<QScalar>,
    pub report: Report,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.n as usize + 1
    }
}

#[derive(Clone, Debug)]
pub struct BranchingResult {
    pub weight: Weight,
    pub params: CoidealParams,
    pub components: Vec<Component>,
    pub span_rank: usize,
    pub rank_route: RankRoute,
    pub report: Report,
}

fn build_component(
    ops: &CoidealOps,
    kb: &KernelBasis,
    coeffs: &[Vec<QScalar>],
    x: u32,
) -> Component {
    let w = ops.rep.weight();
    let p = &ops.params;
    let hw = hw_from_kernel(kb, w, p, x);
    let mut report = verify_hw(ops, &hw, coeffs);
    let n = hw.n;
    let mut module = vec![hw.coords_ambient.clone()];
    for _ in 0..n {
        let next = ops.b2.matvec(module.last().unwrap());
        module.push(next);
    }
    let beyond = ops.b2.matvec(module.last().unwrap());
    report.push("B2^(n+1) psi = 0", beyond.is_zero(), "");
    let mut ladder = vec![Some(QScalar::zero())];
    for j in 1..module.len() {
        ladder.push(ops.b1.matvec(&module[j]).ratio_to(&module[j - 1]));
    }
    let kappa = q(hw.kappa_exponent);
    let expected_b = match abstract_irrep(&kappa, n, p) {
        Ok(m) => m.b,
        Err(e) => {
            report.push("bj_match", false, e.to_string());
            Vec::new()
        }
    };
    if !expected_b.is_empty() {
        let bad = (1..module.len()).find(|&j| ladder[j].as_ref() != Some(&expected_b[j]));
        report.push(
            "bj_match",
            bad.is_none(),
            bad.map(|j| match &ladder[j] {
                Some(v) => format!("j = {}: {} vs {}", j, v, expected_b[j]),
                None => format!("j = {}: B1 B2^j psi is not a multiple of B2^(j-1) psi", j),
            })
            .unwrap_or_default(),
        );
    }
    let bad = module.iter().enumerate().find(|(j, v)| {
        let weight = q(hw.kappa_exponent + 3 * *j as i64);
        ops.k.matvec(v) != v.scale(&weight)
    });
    report.push(
        "k_weights",
        bad.is_none(),
        bad.map(|(j, _)| format!("j = {}", j)).unwrap_or_default(),
    );
    let nonzero = module.iter().all(|v| !v.is_zero());
    report.push("module vectors nonzero", nonzero, "");
    Component {
        i: kb.i,
        x,
        kappa_exponent: hw.kappa_exponent,
        n,
        hw,
        module,
        ladder,
        expected_b,
        report,
    }
}

fn branch_layer(ops: &CoidealOps, i: u32) -> Result<(Report, Vec<Component>), BranchError> {
    let w = ops.rep.weight();
    let p = &ops.params;
    let kb = kernel_gamma(ops.rep, p, i)?;
    let mut r = verify_kernel(ops, &kb);
    let td = tridiagonal_c1(w, p, i);
    let coeffs = c1_on_kernel(ops, &kb);
    r.merge(verify_tridiagonal(ops, &kb, &td, &coeffs));
    let ke = kappa_exponent(w, i);
    let etas: Vec<QScalar> = (0..=w.lambda2).map(|x| eta1(&q(ke), i + x, p)).collect();
    let distinct = etas
        .iter()
        .enumerate()
        .all(|(a, e)| etas[a + 1..].iter().all(|f| e != f));
    r.push("eta1 pairwise distinct within the layer", distinct, "");
    let comps = (0..=w.lambda2)
        .into_par_iter()
        .map(|x| build_component(ops, &kb, &coeffs, x))
        .collect();
    Ok((r, comps))
}

/// Decomposition of `V_lambda` into irreducibles for the coideal subalgebra.
pub fn branch(rep: &RepSpace, p: &CoidealParams) -> Result<BranchingResult, BranchError> {
    let w = rep.weight();
    require_generic(p, w)?;
    let ops = coideal_matrices(rep, p);
    let mut report = Report::new();
    report.merge(layer_sparsity(&ops));
    let layers = (0..=w.lambda1)
        .into_par_iter()
        .map(|i| branch_layer(&ops, i))
        .collect::<Result<Vec<_>, _>>()?;
    let mut components = Vec::new();
    for (i, (r, comps)) in layers.into_iter().enumerate() {
        report.merge_prefixed(&format!("layer {}", i), r);
        for c in comps {
            report.merge_prefixed(
                &format!("component (i={}, x={})", c.i, c.x),
                c.report.clone(),
            );
            components.push(c);
        }
    }
    let expected = (w.lambda1 as usize + 1) * (w.lambda2 as usize + 1);
    report.push(
        "component count (lambda1 + 1)(lambda2 + 1)",
        components.len() == expected,
        format!("{} vs {}", components.len(), expected),
    );
    let dim_sum: usize = components.iter().map(|c| c.dim()).sum();
    report.push(
        "dim_sum",
        dim_sum == rep.dim(),
        format!("{} vs {}", dim_sum, rep.dim()),
    );
    let all: Vec<QVector> = components
        .iter()
        .flat_map(|c| c.module.iter().cloned())
        .collect();
    let m = QMatrix::from_columns(rep.dim(), &all);
    let (span_rank, rank_route) = rank_with_route(&m);
    report.push(
        "span_rank",
        span_rank == rep.dim(),
        format!("{} vs {} ({:?})", span_rank, rep.dim(), rank_route),
    );
    Ok(BranchingResult {
        weight: w,
        params: p.clone(),
        components,
        span_rank,
        rank_route,
        report,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentChecks {
    pub b1_kernel: bool,
    pub c1_eigen: bool,
    pub bj_match: bool,
    pub k_weights: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentJson {
    pub i: u32,
    pub x: u32,
    pub kappa_exp: i64,
    pub dim: usize,
    pub eta1: String,
    pub hw_ambient: Vec<String>,
    pub checks: ComponentChecks,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalCheck {
    pub value: usize,
    pub expected: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalChecks {
    pub span_rank: GlobalCheck,
    pub dim_sum: GlobalCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchJson {
    pub schema: u32,
    pub lambda: [u32; 2],
    pub c1: String,
    pub c2: String,
    pub components: Vec<ComponentJson>,
    pub global_checks: GlobalChecks,
}

#[derive(Clone, Debug, Serialize)]
pub struct CsvRow {
    pub i: u32,
    pub x: u32,
    pub kappa_exp: i64,
    pub dim: usize,
    pub all_pass: bool,
}

impl BranchingResult {
    pub fn dim(&self) -> usize {
        self.weight.dim()
    }

    pub fn to_json(&self) -> BranchJson {
        let named = |c: &Component, n: &str| c.report.passed_named(n).unwrap_or(false);
        let dim_sum = self.components.iter().map(|c| c.dim()).sum();
        BranchJson {
            schema: 1,
            lambda: [self.weight.lambda1, self.weight.lambda2],
            c1: self.params.c1().to_string(),
            c2: self.params.c2().to_string(),
            components: self
                .components
                .iter()
                .map(|c| ComponentJson {
                    i: c.i,
                    x: c.x,
                    kappa_exp: c.kappa_exponent,
                    dim: c.dim(),
                    eta1: c.hw.eta1.to_string(),
                    hw_ambient: c
                        .hw
                        .coords_ambient
                        .to_dense()
                        .iter()
                        .map(|v| v.to_string())
                        .collect(),
                    checks: ComponentChecks {
                        b1_kernel: named(c, "b1_kernel"),
                        c1_eigen: named(c, "c1_eigen"),
                        bj_match: named(c, "bj_match"),
                        k_weights: named(c, "k_weights"),
                    },
                })
                .collect(),
            global_checks: GlobalChecks {
                span_rank: GlobalCheck {
                    value: self.span_rank,
                    expected: self.dim(),
                    passed: self.span_rank == self.dim(),
                },
                dim_sum: GlobalCheck {
                    value: dim_sum,
                    expected: self.dim(),
                    passed: dim_sum == self.dim(),
                },
            },
        }
    }

    pub fn csv_rows(&self) -> Vec<CsvRow> {
        self.components
            .iter()
            .map(|c| CsvRow {
                i: c.i,
                x: c.x,
                kappa_exp: c.kappa_exponent,
                dim: c.dim(),
                all_pass: c.report.all_passed(),
            })
            .collect()
    }
}

/// Eigenvalues and eigenspace dimensions of `C1` on `V_(1,0)`.
#[derive(Clone, Debug)]
pub struct FundamentalEigen {
    pub eigenvalues: Vec<QScalar>,
    pub nullities: Vec<usize>,
    pub report: Report,
}

impl FundamentalEigen {
    pub fn total(&self) -> usize {
        self.nullities.iter().sum()
    }
}

/// Eigenspaces of `C1` on `V_(1,0)` for arbitrary parameters, including the
/// excluded ones. The candidates are the eigenvalues of `psi^0_0`, `psi^1_0`
/// and `B2 psi^1_0`.
pub fn fundamental_eigenspaces(p: &CoidealParams) -> FundamentalEigen {
    let rep = RepSpace::new(Weight::new(1, 0));
    let ops = coideal_matrices(&rep, p);
    let (c1, c2) = (p.c1(), p.c2());
    let e_top = eta1(&q(1), 0, p);
    let e_low = eta1(&q(-2), 1, p);
    let mut eigenvalues: Vec<QScalar> = Vec::new();
    for e in [e_top, e_low.clone(), e_low.shift_q(-1)] {
        if !eigenvalues.contains(&e) {
            eigenvalues.push(e);
        }
    }
    let nullities = eigenvalues
        .iter()
        .map(|e| 3 - rank_exact(&ops.c1.sub(&QMatrix::scalar(3, e))))
        .collect();
    let mut report = Report::new();
    let rho1 = QVector::from_dense(vec![c1.clone(), QScalar::zero(), QScalar::one()]);
    let rho2 = QVector::unit(3, 1);
    let rho3 = QVector::from_dense(vec![-(c2 / q(1)), QScalar::zero(), QScalar::one()]);
    for (name, v) in [("rho1", &rho1), ("rho2", &rho2), ("rho3", &rho3)] {
        let ok = ops.c1.matvec(v).ratio_to(v).is_some();
        report.push(format!("{} is an eigenvector of C1", name), ok, "");
    }
    FundamentalEigen {
        eigenvalues,
        nullities,
        report,
    }
}

/// `V_(1,0)` with `c2 = -q c1`: `rho2` and `rho3` stay eigenvectors but the
/// eigenspaces only span a plane.
pub fn degenerate_demo(c1: &QScalar) -> Result<Report, BranchError> {
    let p = CoidealParams::new(c1.clone(), -(c1 * q(1))).map_err(|_| BranchError::ZeroParameter)?;
    let fe = fundamental_eigenspaces(&p);
    let mut r = Report::new();
    for c in fe
        .report
        .checks
        .iter()
        .filter(|c| c.name != "rho1 is an eigenvector of C1")
    {
        r.push(c.name.clone(), c.passed, c.detail.clone());
    }
    r.push(
        "eigenspace dimensions of C1 sum to 2",
        fe.total() == 2,
        format!("nullities {:?}", fe.nullities),
    );
    r.note(format!("{} distinct eigenvalues", fe.eigenvalues.len()));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(c1: QScalar, c2: QScalar) -> CoidealParams {
        CoidealParams::new(c1, c2).unwrap()
    }

    fn proportional(a: &QVector, b: &QVector) -> bool {
        a.ratio_to(b).map(|c| !c.is_zero()).unwrap_or(false)
    }

    #[test]
    fn fundamental_vectors() {
        let rep = RepSpace::new(Weight::new(1, 0));
        let p = CoidealParams::default();
        let psi0 = highest_weight_vector(&rep, &p, 0, 0).unwrap();
        let rho1 = QVector::from_dense(vec![p.c1().clone(), QScalar::zero(), QScalar::one()]);
        assert!(proportional(&psi0.coords_ambient, &rho1));
        let psi1 = highest_weight_vector(&rep, &p, 1, 0).unwrap();
        assert!(proportional(&psi1.coords_ambient, &QVector::unit(3, 1)));
    }

    #[test]
    fn branch_fundamental() {
        let rep = RepSpace::new(Weight::new(1, 0));
        let res = branch(&rep, &CoidealParams::default()).unwrap();
        assert!(res.report.all_passed(), "{}", res.report);
        let labels: Vec<(i64, u32)> = res
            .components
            .iter()
            .map(|c| (c.kappa_exponent, c.n))
            .collect();
        assert_eq!(labels, vec![(1, 0), (-2, 1)]);
        assert_eq!(res.span_rank, 3);
    }

    #[test]
    fn branch_trivial() {
        let rep = RepSpace::new(Weight::new(0, 0));
        let res = branch(&rep, &CoidealParams::default()).unwrap();
        assert!(res.report.all_passed(), "{}", res.report);
        assert_eq!(res.components.len(), 1);
        assert_eq!(
            (res.components[0].kappa_exponent, res.components[0].n),
            (0, 0)
        );
    }

    #[test]
    fn branch_other_parameters() {
        for w in [Weight::new(1, 1), Weight::new(2, 1), Weight::new(0, 2)] {
            let rep = RepSpace::new(w);
            for p in [
                params(QScalar::one(), QScalar::one()),
                params(q(3), QScalar::from_int(-2)),
            ] {
                let res = branch(&rep, &p).unwrap();
                assert!(res.report.all_passed(), "{} {:?}\n{}", w, p, res.report);
            }
        }
    }

    #[test]
    fn refuses_excluded_parameters() {
        let rep = RepSpace::new(Weight::new(1, 0));
        let p = params(QScalar::one(), -q(1));
        assert!(matches!(
            branch(&rep, &p),
            Err(BranchError::NonGeneric { s: 1, bound: 3 })
        ));
    }

    #[test]
    fn degenerate_fundamental() {
        for c1 in [QScalar::one(), q(2)] {
            let r = degenerate_demo(&c1).unwrap();
            assert!(r.all_passed(), "{}", r);
        }
        let fe = fundamental_eigenspaces(&CoidealParams::default());
        assert_eq!(fe.total(), 3);
        assert!(fe.report.all_passed());
    }

    #[test]
    fn printed_psi_coefficients_are_not_eigenvectors() {
        let w = Weight::new(1, 1);
        let rep = RepSpace::new(w);
        let p = CoidealParams::default();
        let ops = coideal_matrices(&rep, &p);
        let kb = kernel_gamma(&rep, &p, 0).unwrap();
        let (l1, l2) = (1i64, 1i64);
        let c = krawtchouk_c(w, &p, 0);
        let x = 1;
        let mut psi = QVector::zeros(rep.dim());
        for l in 0..=l2 {
            let lu = l as u32;
            let k = dual_q_krawtchouk_r(lu, x, &c, 1) / qpoch(-2 * l2, 2, lu);
            let coef = p
                .c1()
                .pow(l)
                .unwrap()
                .shift_q(-l * (l1 + 2) + l * (l - 1) / 2)
                * qpoch(-2 * l2, 2, lu)
                * qpoch(-2 * l2 - 2 * l1, 2, lu)
                / (qpoch(-2 * l2 - 2 * l1 - 2, 2, lu) * qpoch(-2 * l2, 2, lu))
                * k;
            psi = psi.add(&kb.u[l as usize].scale(&coef));
        }
        let e = eta1(&q(kappa_exponent(w, 0)), x, &p);
        assert_ne!(ops.c1.matvec(&psi), psi.scale(&e));
    }

    #[test]
    fn json_shape() {
        let rep = RepSpace::new(Weight::new(1, 0));
        let res = branch(&rep, &CoidealParams::default()).unwrap();
        let v = serde_json::to_value(res.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["components"].as_array().unwrap().len(), 2);
        assert_eq!(v["components"][1]["kappa_exp"], -2);
        assert_eq!(v["global_checks"]["span_rank"]["value"], 3);
        assert_eq!(v["components"][0]["checks"]["bj_match"], true);
    }
}
