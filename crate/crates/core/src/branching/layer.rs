use rayon::prelude::*;

use super::BranchError;
use crate::coideal::{CoidealOps, CoidealParams};
use crate::exactq::{qbr, QScalar};
use crate::linalg::{kernel_basis, solve_in_span, QVector};
use crate::report::Report;
use crate::uqsl3rep::{ActionCoeffs, BasisIndex, RepSpace, Weight};

fn q(e: i64) -> QScalar {
    QScalar::q_pow(e)
}

/// Span of the basis vectors `(k, l, k + i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerSubspace {
    pub i: u32,
    /// Ambient positions ordered by `(k, l)`.
    pub indices: Vec<usize>,
    pub lambda: Weight,
}

impl LayerSubspace {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Number of layers `k = 0..=lambda1 - i`.
    pub fn layers(&self) -> u32 {
        self.lambda.lambda1 - self.i + 1
    }

    pub fn position(&self, k: u32, l: u32) -> usize {
        self.indices[(k * (self.lambda.lambda2 + 1) + l) as usize]
    }
}

pub fn layer_subspace(rep: &RepSpace, i: u32) -> Result<LayerSubspace, BranchError> {
    let w = rep.weight();
    if i > w.lambda1 {
        return Err(BranchError::LayerOutOfRange {
            i,
            lambda1: w.lambda1,
        });
    }
    let mut indices = Vec::new();
    for k in 0..=w.lambda1 - i {
        for l in 0..=w.lambda2 {
            let idx = BasisIndex::new(k, l, k + i);
            indices.push(rep.position(idx).expect("layer index lies in the basis"));
        }
    }
    Ok(LayerSubspace {
        i,
        indices,
        lambda: w,
    })
}

/// Layer number `m - k` of every ambient basis vector.
fn layer_of(rep: &RepSpace) -> Vec<i64> {
    rep.basis()
        .iter()
        .map(|b| b.m as i64 - b.k as i64)
        .collect()
}

/// `B1` raises the layer number by one and `B2` lowers it by one.
pub fn layer_sparsity(ops: &CoidealOps) -> Report {
    let mut r = Report::new();
    let layer = layer_of(ops.rep);
    for (name, m, shift) in [
        ("B1 maps U_i into U_(i+1)", &ops.b1, 1),
        ("B2 maps U_(i+1) into U_i", &ops.b2, -1),
    ] {
        match m
            .entries()
            .find(|(row, col, _)| layer[*row] != layer[*col] + shift)
        {
            None => r.pass(name),
            Some((row, col, _)) => r.push(name, false, format!("entry ({}, {})", row, col)),
        }
    }
    r
}

/// Kernel of `B1` on `U_i`: `u[n]` has top-layer coordinates `delta_{l,n}`,
/// and `gamma[n][k][l]` is its coordinate at `(k, l, k + i)`.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub i: u32,
    pub layer: LayerSubspace,
    pub gamma: Vec<Vec<Vec<QScalar>>>,
    pub u: Vec<QVector>,
}

pub fn kernel_gamma(rep: &RepSpace, p: &CoidealParams, i: u32) -> Result<KernelBasis, BranchError> {
    let layer = layer_subspace(rep, i)?;
    let w = rep.weight();
    let c = ActionCoeffs::new(w);
    let (l1, l2) = (w.lambda1 as i64, w.lambda2 as i64);
    let ii = i as i64;
    let top = (l1 - ii) as usize;
    let width = (l2 + 1) as usize;
    let gamma = (0..width)
        .into_par_iter()
        .map(|n| {
            let mut g = vec![vec![QScalar::zero(); width]; top + 1];
            g[top][n] = QScalar::one();
            for k in (0..top).rev() {
                let ki = k as i64;
                for l in 0..width {
                    let li = l as i64;
                    let mut t = QScalar::zero();
                    if l >= 1 && !g[k + 1][l - 1].is_zero() {
                        t = t + c.b(ki + 1, li - 1, ki + ii + 1) * &g[k + 1][l - 1];
                    }
                    if !g[k + 1][l].is_zero() {
                        t = t - p.c1().shift_q(li + 2 * ii + ki + 1 - l1)
                            * c.eta(ki + 1, li, ki + ii + 1)
                            * &g[k + 1][l];
                    }
                    let a = c.a(ki, li, ki + ii);
                    if a.is_zero() {
                        return Err(BranchError::ZeroDivisor { i, k, l });
                    }
                    g[k][l] = -t / a;
                }
            }
            Ok(g)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let u = gamma
        .iter()
        .map(|g| {
            let mut v = QVector::zeros(rep.dim());
            for (k, row) in g.iter().enumerate() {
                for (l, x) in row.iter().enumerate() {
                    v.set(layer.position(k as u32, l as u32), x.clone());
                }
            }
            v
        })
        .collect();
    Ok(KernelBasis { i, layer, gamma, u })
}

/// `B1 u = 0`, the sub-top closed forms, and agreement with the kernel
/// found by elimination.
pub fn verify_kernel(ops: &CoidealOps, kb: &KernelBasis) -> Report {
    let mut r = Report::new();
    let w = ops.rep.weight();
    let (l1, l2) = (w.lambda1 as i64, w.lambda2 as i64);
    let i = kb.i as i64;
    let c1 = ops.params.c1();
    r.push(
        "kernel has lambda2 + 1 vectors",
        kb.u.len() == (l2 + 1) as usize,
        format!("{} vectors", kb.u.len()),
    );
    let bad = kb.u.iter().position(|u| !ops.b1.matvec(u).is_zero());
    r.push(
        "B1 u_n = 0",
        bad.is_none(),
        bad.map(|n| format!("n = {}", n)).unwrap_or_default(),
    );
    if l1 > i {
        let k = (l1 - i - 1) as usize;
        let d2 = qbr(1) * qbr(1);
        let mut ok = true;
        let mut detail = String::new();
        for n in 0..=l2 {
            let nu = n as usize;
            let first = c1.shift_q(n + i) * qbr(l1 - i) * qbr(l2 + l1 - n) / &d2;
            if kb.gamma[nu][k][nu] != first && ok {
                ok = false;
                detail = format!("gamma^{}_({}, {})", n, k, n);
            }
            if n < l2 {
                let second = -(qbr(l1 - i) * qbr(l2 + l1 - n - 1))
                    / (qbr(l2 + l1 + 1 - n) * qbr(l2 + i - n));
                if kb.gamma[nu][k][nu + 1] != second && ok {
                    ok = false;
                    detail = format!("gamma^{}_({}, {})", n, k, n + 1);
                }
            }
        }
        r.push("sub-top gamma coefficients match closed forms", ok, detail);
    }
    let cols = &kb.layer.indices;
    let restricted = ops.b1.restrict(&(0..ops.dim()).collect::<Vec<_>>(), cols);
    let elim: Vec<QVector> = kernel_basis(&restricted)
        .into_iter()
        .map(|v| {
            let mut out = QVector::zeros(ops.dim());
            for (j, x) in v.iter() {
                out.set(cols[j], x.clone());
            }
            out
        })
        .collect();
    r.push(
        "elimination kernel has lambda2 + 1 vectors",
        elim.len() == kb.u.len(),
        format!("{} vs {}", elim.len(), kb.u.len()),
    );
    let forward = elim.iter().all(|v| solve_in_span(&kb.u, v).is_ok());
    let backward = kb.u.iter().all(|v| solve_in_span(&elim, v).is_ok());
    r.push(
        "recurrence kernel and elimination kernel span the same space",
        forward && backward,
        format!("forward {} backward {}", forward, backward),
    );
    r
}

/// Closed-form coefficients of `C1` on `(u_n)`:
/// `C1 u_n = A(n) u_(n+1) + (B(n) + D) u_n + C(n) u_(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TridiagonalData {
    pub i: u32,
    /// `A(n)` for `n < lambda2`.
    pub a: Vec<QScalar>,
    pub b: Vec<QScalar>,
    /// `C(0) = 0`.
    pub c: Vec<QScalar>,
    pub d: QScalar,
}

impl TridiagonalData {
    /// Expected coefficient of `u_s` in `C1 u_n`.
    pub fn coefficient(&self, n: usize, s: usize) -> QScalar {
        if s == n + 1 {
            self.a.get(n).cloned().unwrap_or_else(QScalar::zero)
        } else if s == n {
            &self.b[n] + &self.d
        } else if s + 1 == n {
            self.c[n].clone()
        } else {
            QScalar::zero()
        }
    }
}

pub fn tridiagonal_c1(w: Weight, p: &CoidealParams, i: u32) -> TridiagonalData {
    let (l1, l2) = (w.lambda1 as i64, w.lambda2 as i64);
    let i = i as i64;
    let (c1, c2) = (p.c1(), p.c2());
    let one = QScalar::one();
    let om = |e: i64| &one - q(e);
    let kappa = q(l1 - l2 - 3 * i);
    let kinv = q(-(l1 - l2 - 3 * i));
    let d = (-(c2 * &kappa) + c1 * &kinv * (q(1) + q(-1))) / qbr(1);
    let a = (0..l2)
        .map(|n| {
            q(l2 + i - n) * om(2) * om(2 * l1 + 2 * l2 - 2 * n)
                / (om(2 * l2 + 2 * l1 - 2 * n + 2) * om(2 * l2 + 2 * i - 2 * n))
        })
        .collect();
    let b = (0..=l2)
        .map(|n| {
            -(c1.shift_q(2 * n + i - l1 - l2) * om(2 * l2 - 2 * n + 2 * i)) / om(2)
                + c2.shift_q(l1 - l2 + 2 * n - i + 1) * om(-2 * n - 2 * i) / om(2)
        })
        .collect();
    let c = (0..=l2)
        .map(|n| {
            (c1 * c2).shift_q(3 * n - 3 * l2 - i - 2)
                * om(2 * n)
                * om(2 * l2 - 2 * n + 2)
                * om(2 * l1 + 2 * l2 - 2 * n + 4)
                * om(2 * l2 + 2 * i + 2 - 2 * n)
                / (om(2).pow(3).unwrap() * om(2 * l2 + 2 * l1 + 2 - 2 * n))
        })
        .collect();
    TridiagonalData {
        i: i as u32,
        a,
        b,
        c,
        d,
    }
}

/// `coeffs[n][s]`: coefficient of `u_s` in `C1 u_n`, read off from the top
/// layer of `C1 u_n`.
pub fn c1_on_kernel(ops: &CoidealOps, kb: &KernelBasis) -> Vec<Vec<QScalar>> {
    let top = kb.layer.layers() - 1;
    let width = kb.u.len();
    kb.u.par_iter()
        .map(|u| {
            let v = ops.c1.matvec(u);
            (0..width)
                .map(|s| v.get(kb.layer.position(top, s as u32)))
                .collect()
        })
        .collect()
}

/// Matrix-route coefficients against the closed forms, and against a
/// direct solve in the span of the kernel vectors.
pub fn verify_tridiagonal(
    ops: &CoidealOps,
    kb: &KernelBasis,
    td: &TridiagonalData,
    coeffs: &[Vec<QScalar>],
) -> Report {
    let mut r = Report::new();
    let width = kb.u.len();
    let mut closed_ok = true;
    let mut closed_detail = String::new();
    let mut solve_ok = true;
    let mut solve_detail = String::new();
    for (n, row) in coeffs.iter().enumerate().take(width) {
        for (s, got) in row.iter().enumerate() {
            let want = td.coefficient(n, s);
            if *got != want && closed_ok {
                closed_ok = false;
                closed_detail =
                    format!("coefficient of u_{} in C1 u_{}: {} vs {}", s, n, got, want);
            }
        }
        match solve_in_span(&kb.u, &ops.c1.matvec(&kb.u[n])) {
            Ok(x) if x == coeffs[n] => {}
            Ok(_) if solve_ok => {
                solve_ok = false;
                solve_detail = format!("solve disagrees with top layer at n = {}", n);
            }
            Err(e) if solve_ok => {
                solve_ok = false;
                solve_detail = format!("C1 u_{} leaves the kernel: {}", n, e);
            }
            _ => {}
        }
    }
    r.push(
        "C1 u_n = A(n) u_(n+1) + (B(n) + D) u_n + C(n) u_(n-1)",
        closed_ok,
        closed_detail,
    );
    r.push(
        "C1 u_n solved in span of u equals top-layer read-off",
        solve_ok,
        solve_detail,
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coideal::coideal_matrices;

    #[test]
    fn layer_sizes() {
        let rep = RepSpace::new(Weight::new(2, 5));
        assert_eq!(layer_subspace(&rep, 0).unwrap().len(), 18);
        assert_eq!(layer_subspace(&rep, 2).unwrap().len(), 6);
        assert!(layer_subspace(&rep, 3).is_err());
        let rep = RepSpace::new(Weight::new(1, 0));
        let u1 = layer_subspace(&rep, 1).unwrap();
        assert_eq!(
            u1.indices,
            vec![rep.position(BasisIndex::new(0, 0, 1)).unwrap()]
        );
    }

    #[test]
    fn sparsity_holds() {
        let rep = RepSpace::new(Weight::new(2, 3));
        let r = layer_sparsity(&coideal_matrices(&rep, &CoidealParams::default()));
        assert!(r.all_passed(), "{}", r);
    }

    #[test]
    fn top_layer_is_identity() {
        let rep = RepSpace::new(Weight::new(2, 2));
        let kb = kernel_gamma(&rep, &CoidealParams::default(), 2).unwrap();
        for (n, g) in kb.gamma.iter().enumerate() {
            assert_eq!(g.len(), 1);
            for (l, x) in g[0].iter().enumerate() {
                assert_eq!(x.is_one(), l == n);
                assert_eq!(x.is_zero(), l != n);
            }
        }
    }

    #[test]
    fn sub_top_example() {
        let rep = RepSpace::new(Weight::new(2, 2));
        let p = CoidealParams::default();
        let kb = kernel_gamma(&rep, &p, 0).unwrap();
        for n in 0..=2i64 {
            let want = p.c1().shift_q(n) * qbr(2) * qbr(4 - n) / (qbr(1) * qbr(1));
            assert_eq!(kb.gamma[n as usize][1][n as usize], want);
        }
    }

    #[test]
    fn kernel_checks_pass() {
        for w in [Weight::new(1, 0), Weight::new(2, 2), Weight::new(1, 3)] {
            let rep = RepSpace::new(w);
            let p = CoidealParams::default();
            let ops = coideal_matrices(&rep, &p);
            for i in 0..=w.lambda1 {
                let kb = kernel_gamma(&rep, &p, i).unwrap();
                let r = verify_kernel(&ops, &kb);
                assert!(r.all_passed(), "{} i={}\n{}", w, i, r);
            }
        }
    }

    #[test]
    fn fundamental_one_by_one_block() {
        let rep = RepSpace::new(Weight::new(1, 0));
        let p = CoidealParams::default();
        let (c1, c2) = (p.c1(), p.c2());
        let middle = (c1 * q(4) + c1 - q(1) * c2) / (q(2) - QScalar::one());
        let top = tridiagonal_c1(rep.weight(), &p, 0);
        let low = tridiagonal_c1(rep.weight(), &p, 1);
        assert!(top.c[0].is_zero() && low.c[0].is_zero());
        // F1 v spans U_1, so the middle entry is the block on U_1.
        assert_eq!(low.coefficient(0, 0), middle);
        assert_eq!(top.coefficient(0, 0), crate::coideal::eta1(&q(1), 0, &p));
    }

    #[test]
    fn tridiagonal_matches_matrix_route() {
        for (w, p) in [
            (Weight::new(2, 2), CoidealParams::default()),
            (
                Weight::new(1, 2),
                CoidealParams::new(QScalar::one(), QScalar::from_int(3)).unwrap(),
            ),
        ] {
            let rep = RepSpace::new(w);
            let ops = coideal_matrices(&rep, &p);
            for i in 0..=w.lambda1 {
                let kb = kernel_gamma(&rep, &p, i).unwrap();
                let td = tridiagonal_c1(w, &p, i);
                let r = verify_tridiagonal(&ops, &kb, &td, &c1_on_kernel(&ops, &kb));
                assert!(r.all_passed(), "{} i={}\n{}", w, i, r);
            }
        }
    }
}
