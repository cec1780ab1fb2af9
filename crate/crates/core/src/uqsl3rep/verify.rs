use std::ops::RangeInclusive;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::basis::{ActionCoeffs, Weight};
use super::expr::*;
use super::rep::{Gen, RepSpace};
use crate::exactq::{qbr, qint, qpoch, QScalar};
use crate::linalg::{QMatrix, QVector};
use crate::report::Report;

fn cartan(i: usize, j: usize) -> i64 {
    if i == j {
        2
    } else {
        -1
    }
}

/// Checks the algebra relations, the Serre relations, the highest-weight
/// conditions and compatibility of the generators with the norm table.
pub fn verify_defining_relations(rep: &RepSpace) -> Report {
    let mut r = Report::new();
    let n = rep.dim();
    let id = QMatrix::identity(n);
    let m = |g: Gen| rep.gen(g);
    let ks = [Gen::K1, Gen::K1inv, Gen::K2, Gen::K2inv];
    for (a, ka) in ks.iter().enumerate() {
        for kb in &ks[a + 1..] {
            r.matrices_equal(
                format!("{} {} = {} {}", ka, kb, kb, ka),
                &m(*ka).matmul(m(*kb)),
                &m(*kb).matmul(m(*ka)),
            );
        }
    }
    for (k, kinv) in [(Gen::K1, Gen::K1inv), (Gen::K2, Gen::K2inv)] {
        r.matrices_equal(format!("{} {} = 1", k, kinv), &m(k).matmul(m(kinv)), &id);
        r.matrices_equal(format!("{} {} = 1", kinv, k), &m(kinv).matmul(m(k)), &id);
    }
    let e = [Gen::E1, Gen::E2];
    let f = [Gen::F1, Gen::F2];
    let k = [Gen::K1, Gen::K2];
    let kinv = [Gen::K1inv, Gen::K2inv];
    for i in 0..2 {
        for j in 0..2 {
            let a = cartan(i, j);
            r.matrices_equal(
                format!("{} {} = q^{} {} {}", k[i], e[j], a, e[j], k[i]),
                &m(k[i]).matmul(m(e[j])),
                &m(e[j]).matmul(m(k[i])).scale(&QScalar::q_pow(a)),
            );
            r.matrices_equal(
                format!("{} {} = q^{} {} {}", k[i], f[j], -a, f[j], k[i]),
                &m(k[i]).matmul(m(f[j])),
                &m(f[j]).matmul(m(k[i])).scale(&QScalar::q_pow(-a)),
            );
            let comm = m(e[i]).matmul(m(f[j])).sub(&m(f[j]).matmul(m(e[i])));
            let rhs = if i == j {
                m(k[i]).sub(m(kinv[i])).scale(&(QScalar::one() / qbr(1)))
            } else {
                QMatrix::zeros(n, n)
            };
            r.matrices_equal(
                format!("[{}, {}] = delta (K - K^-1)/(q - q^-1)", e[i], f[j]),
                &comm,
                &rhs,
            );
        }
    }
    let two = qint(2);
    for (x, y) in [
        (Gen::E1, Gen::E2),
        (Gen::E2, Gen::E1),
        (Gen::F1, Gen::F2),
        (Gen::F2, Gen::F1),
    ] {
        let xx = m(x).matmul(m(x));
        let lhs = xx
            .matmul(m(y))
            .sub(&m(x).matmul(m(y)).matmul(m(x)).scale(&two))
            .add(&m(y).matmul(&xx));
        r.matrices_equal(
            format!("{0}^2 {1} - [2] {0} {1} {0} + {1} {0}^2 = 0", x, y),
            &lhs,
            &QMatrix::zeros(n, n),
        );
    }
    let v = QVector::unit(n, 0);
    let lam = [rep.weight().lambda1 as i64, rep.weight().lambda2 as i64];
    for i in 0..2 {
        r.vectors_equal(
            format!("{} v = 0", e[i]),
            &m(e[i]).matvec(&v),
            &QVector::zeros(n),
        );
        r.vectors_equal(
            format!("{} v = q^{} v", k[i], lam[i]),
            &m(k[i]).matvec(&v),
            &v.scale(&QScalar::q_pow(lam[i])),
        );
    }
    let d = rep.norm_matrix();
    for i in 0..2 {
        r.matrices_equal(
            format!("{}^T D = D {} {}", e[i], k[i], f[i]),
            &m(e[i]).transpose().matmul(&d),
            &d.matmul(&m(k[i]).matmul(m(f[i]))),
        );
        r.matrices_equal(
            format!("{}^T D = D {} {}", f[i], e[i], kinv[i]),
            &m(f[i]).transpose().matmul(&d),
            &d.matmul(&m(e[i]).matmul(m(kinv[i]))),
        );
    }
    let c = ActionCoeffs::new(rep.weight());
    let mut ok = true;
    let mut detail = String::new();
    for (p, b) in rep.basis().iter().enumerate() {
        let (bk, bl, bm) = (b.k as i64, b.l as i64, b.m as i64);
        let want = [c.k1_exponent(bk, bl, bm), c.k2_exponent(bk, bl, bm)];
        for (i, kk) in k.iter().enumerate() {
            let row = m(*kk).row(p);
            let good = row.len() == 1 && row.get(&p) == Some(&QScalar::q_pow(want[i]));
            if !good && ok {
                ok = false;
                detail = format!("{} at basis vector {}", kk, b);
            }
        }
    }
    r.push("K1, K2 diagonal with the basis weights", ok, detail);
    r
}

/// Squared norms are positive at the sample points.
pub fn verify_norm_positivity(rep: &RepSpace, points: &[BigRational]) -> Report {
    let mut r = Report::new();
    for p in points {
        let bad = rep.basis().iter().zip(rep.norms()).find(|(_, h)| {
            h.evaluate_at(p)
                .map(|v| v <= BigRational::zero())
                .unwrap_or(true)
        });
        match bad {
            None => r.pass(format!("norms positive at q = {}", p)),
            Some((b, h)) => r.push(
                format!("norms positive at q = {}", p),
                false,
                format!("H{} = {}", b, h),
            ),
        }
    }
    r
}

/// `x * f()`, skipping `f` when `x` vanishes; `f` may be singular there.
fn guarded(x: QScalar, f: impl FnOnce() -> QScalar) -> QScalar {
    if x.is_zero() {
        x
    } else {
        x * f()
    }
}

fn ev_mat(ev: &Evaluator, e: &AlgExpr) -> QMatrix {
    ev.eval(e)
}

fn w(syms: &[Sym]) -> AlgExpr {
    AlgExpr::word(syms.to_vec())
}

fn checks_for_parameter(ev: &Evaluator, a: i64) -> Report {
    let mut r = Report::new();
    let rep = ev.rep();
    let n = rep.dim();
    let q = QScalar::q();
    let fh = |b: i64| Sym::F3hat(b);
    let eh = |b: i64| Sym::E3hat(b);
    let mat = |e: &AlgExpr| ev_mat(ev, e);
    r.matrices_equal(
        format!("F1 F3hat[{0}] = F3hat[{0}] F1", a),
        &mat(&w(&[F1, fh(a)])),
        &mat(&w(&[fh(a), F1])),
    );
    r.matrices_equal(
        format!("E2 F3hat[{0}] = F3hat[{1}] E2 - [{0}] F1", a, a - 2),
        &mat(&w(&[E2, fh(a)])),
        &mat(&w(&[fh(a - 2), E2]).sub(&AlgExpr::term(qint(a), vec![F1]))),
    );
    for (k, name) in [(K1, "K1"), (K2, "K2")] {
        r.matrices_equal(
            format!("{0} F3hat[{1}] = q^-1 F3hat[{1}] {0}", name, a),
            &mat(&w(&[k, fh(a)])),
            &mat(&AlgExpr::term(QScalar::q_pow(-1), vec![fh(a), k])),
        );
        r.matrices_equal(
            format!("{0} E3hat[{1}] = q E3hat[{1}] {0}", name, a),
            &mat(&w(&[k, eh(a)])),
            &mat(&AlgExpr::term(q.clone(), vec![eh(a), k])),
        );
    }
    r.matrices_equal(
        format!("F2 F3hat[{}] = F3hat[{}] F2", a, a + 1),
        &mat(&w(&[F2, fh(a)])),
        &mat(&w(&[fh(a + 1), F2])),
    );
    r.matrices_equal(
        format!("E1 F3hat[{0}] = F3hat[{1}] E1 + F2 P{1}(K1 K2)", a, a + 1),
        &mat(&w(&[E1, fh(a)])),
        &mat(&w(&[fh(a + 1), E1]).add(&AlgExpr::sym(F2).mul(&p_k12(a + 1)))),
    );
    let d = rep.norm_matrix();
    r.matrices_equal(
        format!("F3hat[{0}]^T D = D q E3hat[{0}] (K1 K2)^-1", a),
        &mat(&AlgExpr::sym(fh(a))).transpose().matmul(&d),
        &d.matmul(&mat(&AlgExpr::term(q.clone(), vec![eh(a), K1INV, K2INV]))),
    );
    let lmax = rep.weight().lambda2 + 1;
    let e1 = rep.gen(super::rep::Gen::E1);
    let f2 = rep.gen(super::rep::Gen::F2);
    let fa = ev.sym_matrix(fh(a));
    let fa1 = ev.sym_matrix(fh(a + 1));
    let mut pow_a = QMatrix::identity(n);
    let mut pow_a1 = QMatrix::identity(n);
    for l in 1..=lmax as i64 {
        let prev = pow_a.clone();
        pow_a = pow_a.matmul(&fa);
        pow_a1 = pow_a1.matmul(&fa1);
        let rhs = pow_a1.matmul(e1).add(
            &f2.matmul(&prev)
                .matmul(&mat(&p_k12(a + 2 - l)))
                .scale(&qint(l)),
        );
        r.matrices_equal(
            format!(
                "E1 F3hat[{0}]^{1} = F3hat[{2}]^{1} E1 + [{1}] F2 F3hat[{0}]^{3} P{4}(K1 K2)",
                a,
                l,
                a + 1,
                l - 1,
                a + 2 - l
            ),
            &e1.matmul(&pow_a),
            &rhs,
        );
    }
    r
}

/// Identities among the generators and the elements `F3`, `E3`,
/// `F3hat[a]`, `E3hat[a]` for every `a` in the range.
pub fn verify_lemma_relations(rep: &RepSpace, a_range: RangeInclusive<i64>) -> Report {
    let ev = Evaluator::new(rep);
    let mut r = Report::new();
    let per_a: Vec<Report> = a_range
        .collect::<Vec<_>>()
        .par_iter()
        .map(|a| checks_for_parameter(&ev, *a))
        .collect();
    for x in per_a {
        r.merge(x);
    }
    let q = QScalar::q();
    let mat = |e: &AlgExpr| ev.eval(e);
    let f3 = AlgExpr::sym(Sym::F3);
    r.matrices_equal(
        "F2 F3 = q F3 F2",
        &mat(&w(&[F2, Sym::F3])),
        &mat(&AlgExpr::term(q.clone(), vec![Sym::F3, F2])),
    );
    let d = rep.norm_matrix();
    r.matrices_equal(
        "F3^T D = D q E3 (K1 K2)^-1",
        &mat(&f3).transpose().matmul(&d),
        &d.matmul(&mat(&AlgExpr::term(q.clone(), vec![Sym::E3, K1INV, K2INV]))),
    );
    r.matrices_equal(
        "F3hat = F3 P1(K2) + q F2 F1 K2",
        &mat(&AlgExpr::sym(Sym::F3hat(0))),
        &mat(&f3
            .mul(&p_k2(1))
            .add(&AlgExpr::term(q.clone(), vec![F2, F1, K2]))),
    );
    let lhs = mat(&w(&[E1, Sym::F3]));
    r.matrices_equal(
        "E1 F3 = F3 E1 + F2 K1^-1",
        &lhs,
        &mat(&w(&[Sym::F3, E1]).add(&w(&[F2, K1INV]))),
    );
    let with_k1 = mat(&w(&[Sym::F3, E1]).add(&w(&[F2, K1])));
    if lhs == with_k1 {
        r.note("E1 F3 = F3 E1 + F2 K1 also holds on this module");
    } else {
        r.note("E1 F3 = F3 E1 + F2 K1 fails on this module; the K1^-1 form holds");
    }
    r.merge(verify_ladder_identities(&ev));
    r.merge(verify_layer_actions(rep));
    r
}

/// Commutation of `E_i` with powers of `F_i`, and the action of
/// `E_i^k F_i^k` on the highest weight vector.
fn verify_ladder_identities(ev: &Evaluator) -> Report {
    let mut r = Report::new();
    let rep = ev.rep();
    let n = rep.dim();
    let wt = rep.weight();
    let kmax = (wt.lambda1 + wt.lambda2 + 1) as i64;
    let v = QVector::unit(n, 0);
    let one_minus_q2 = QScalar::one() - QScalar::q_pow(2);
    for (i, e, f, k, kinv) in [(1u8, E1, F1, K1, K1INV), (2u8, E2, F2, K2, K2INV)] {
        let em = ev.sym_matrix(e);
        let fm = ev.sym_matrix(f);
        let mut fk = QMatrix::identity(n);
        for kk in 1..=kmax {
            let prev = fk.clone();
            fk = fk.matmul(&fm);
            let rhs = fk
                .matmul(&em)
                .add(&prev.matmul(&ev.eval(&p_ki(i, 1 - kk))).scale(&qint(kk)));
            r.matrices_equal(
                format!(
                    "E{0} F{0}^{1} = F{0}^{1} E{0} + [{1}] F{0}^{2} P{3}(K{0})",
                    i,
                    kk,
                    kk - 1,
                    1 - kk
                ),
                &em.matmul(&fk),
                &rhs,
            );
            let ek_fk_v = {
                let mut x = fk.matvec(&v);
                for _ in 0..kk {
                    x = em.matvec(&x);
                }
                x
            };
            let pre = qpoch(2, 2, kk as u32) / one_minus_q2.pow(2 * kk).unwrap();
            let kk2 = AlgExpr::word(vec![k, k]);
            let mut first = AlgExpr::scalar(pre.shift_q(kk));
            for j in 0..kk {
                first =
                    first.mul(&AlgExpr::one().sub(&kk2.scale(&QScalar::q_pow(2 - 2 * kk + 2 * j))));
            }
            first = first.mul(&AlgExpr::word(vec![kinv; kk as usize]));
            let kinv2 = AlgExpr::word(vec![kinv, kinv]);
            let sign = if kk % 2 == 0 { 1 } else { -1 };
            let mut second = AlgExpr::scalar(pre.scale_int(sign).shift_q(-kk * (kk - 2)));
            for j in 0..kk {
                second = second.mul(&AlgExpr::one().sub(&kinv2.scale(&QScalar::q_pow(2 * j))));
            }
            second = second.mul(&AlgExpr::word(vec![k; kk as usize]));
            r.vectors_equal(
                format!("E{0}^{1} F{0}^{1} v, first closed form", i, kk),
                &ek_fk_v,
                &ev.apply(&first, &v),
            );
            r.vectors_equal(
                format!("E{0}^{1} F{0}^{1} v, second closed form", i, kk),
                &ek_fk_v,
                &ev.apply(&second, &v),
            );
        }
    }
    r
}

/// Actions of `F1 F2`, `E2 F2`, `F1 E1`, `E2 E1` and `K^{+-1}` on the
/// basis vectors with `m = k + i`.
pub fn verify_layer_actions(rep: &RepSpace) -> Report {
    let mut r = Report::new();
    let ev = Evaluator::new(rep);
    let wt = rep.weight();
    let c = ActionCoeffs::new(wt);
    let n = rep.dim();
    let (l1, l2) = (wt.lambda1 as i64, wt.lambda2 as i64);
    for i in 0..=l1 {
        let mut ok = [true; 6];
        let mut detail: [String; 6] = Default::default();
        for b in rep.basis().iter().filter(|b| b.m as i64 == b.k as i64 + i) {
            let p = rep.position(*b).unwrap();
            let (k, l, m) = (b.k as i64, b.l as i64, b.m as i64);
            let e = QVector::unit(n, p);
            type Coeff<'c> = Box<dyn Fn() -> QScalar + 'c>;
            let vec_of = |parts: Vec<((i64, i64, i64), Coeff)>| {
                let mut out = QVector::zeros(n);
                for ((tk, tl, tm), x) in parts {
                    if let Some(t) = rep.position_signed(tk, tl, tm) {
                        out.add_at(t, &x());
                    }
                }
                out
            };
            let expected = [
                vec_of(vec![
                    ((k + 1, l, m + 1), Box::new(move || c.a(k + 1, l, m))),
                    ((k, l + 1, m), Box::new(move || c.b(k + 1, l, m))),
                ]),
                vec_of(vec![((k, l, m), Box::new(move || c.eta(k + 1, l, m)))]),
                vec_of(vec![
                    (
                        (k, l, m),
                        Box::new(move || guarded(c.alpha(k, l, m), || c.a(k, l, m - 1))),
                    ),
                    (
                        (k - 1, l + 1, m - 1),
                        Box::new(move || guarded(c.alpha(k, l, m), || c.b(k, l, m - 1))),
                    ),
                    (
                        (k + 1, l - 1, m + 1),
                        Box::new(move || guarded(c.beta(k, l, m), || c.a(k + 1, l - 1, m))),
                    ),
                    (
                        (k, l, m),
                        Box::new(move || guarded(c.beta(k, l, m), || c.b(k + 1, l - 1, m))),
                    ),
                ]),
                vec_of(vec![
                    (
                        (k - 1, l, m - 1),
                        Box::new(move || guarded(c.alpha(k, l, m), || c.eta(k, l, m - 1))),
                    ),
                    (
                        (k, l - 1, m),
                        Box::new(move || guarded(c.beta(k, l, m), || c.eta(k + 1, l - 1, m))),
                    ),
                ]),
                e.scale(&QScalar::q_pow(l1 - l2 - 3 * i)),
                e.scale(&QScalar::q_pow(l2 - l1 + 3 * i)),
            ];
            let words = [
                vec![F1, F2],
                vec![E2, F2],
                vec![F1, E1],
                vec![E2, E1],
                vec![K1, K2INV],
                vec![K1INV, K2],
            ];
            for t in 0..6 {
                let got = ev.apply(&AlgExpr::word(words[t].clone()), &e);
                if got != expected[t] && ok[t] {
                    ok[t] = false;
                    detail[t] = format!("basis vector {}", b);
                }
            }
        }
        let names = ["F1 F2", "E2 F2", "F1 E1", "E2 E1", "K", "K^-1"];
        for t in 0..6 {
            r.push(
                format!(
                    "{} on layer subspace i={} by the closed coefficients",
                    names[t], i
                ),
                ok[t],
                detail[t].clone(),
            );
        }
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("symbol {0} is not a lowering operator")]
    NotLowering(String),
}

fn check_lowering(word: &[Sym]) -> Result<(), OracleError> {
    for s in word {
        if !matches!(s, Sym::G(Gen::F1) | Sym::G(Gen::F2) | Sym::F3hat(0)) {
            return Err(OracleError::NotLowering(s.to_string()));
        }
    }
    Ok(())
}

/// `<word1 v, word2 v>` computed by moving `word1` across as its adjoint,
/// without the closed-form norms.
pub fn inner_product_oracle(
    w: Weight,
    word1: &[Sym],
    word2: &[Sym],
) -> Result<QScalar, OracleError> {
    check_lowering(word1)?;
    check_lowering(word2)?;
    let rep = RepSpace::new(w);
    let ev = Evaluator::new(&rep);
    let v = QVector::unit(rep.dim(), 0);
    let y = ev.apply(&AlgExpr::word(word2.to_vec()), &v);
    let z = ev.apply(&AlgExpr::word(word1.to_vec()).star(), &y);
    Ok(z.get(0))
}

/// The monomial `F2^k F3hat^l F1^m`.
pub fn basis_word(k: u32, l: u32, m: u32) -> Vec<Sym> {
    let mut out = vec![F2; k as usize];
    out.extend(std::iter::repeat_n(Sym::F3hat(0), l as usize));
    out.extend(std::iter::repeat_n(F1, m as usize));
    out
}

/// Gram matrix of the basis from the adjoint computation, and a report
/// confirming that each monomial applied to `v` is its basis vector.
pub fn oracle_gram(rep: &RepSpace) -> (QMatrix, Report) {
    let ev = Evaluator::new(rep);
    let n = rep.dim();
    let v = QVector::unit(n, 0);
    let transposes: Vec<QMatrix> = Gen::ALL.iter().map(|g| rep.gen(*g).transpose()).collect();
    let rows: Vec<(QVector, QVector)> = rep
        .basis()
        .par_iter()
        .map(|b| {
            let word = basis_word(b.k, b.l, b.m);
            let y = ev.apply(&AlgExpr::word(word.clone()), &v);
            // e0^T M(X*) as a column vector: apply transposes left to right.
            let star = AlgExpr::word(word).star();
            let mut u = QVector::zeros(n);
            for (c, wd) in star.terms() {
                let mut x = v.clone();
                for s in wd {
                    let Sym::G(g) = s else {
                        unreachable!("expanded")
                    };
                    let slot = Gen::ALL.iter().position(|h| h == g).unwrap();
                    x = transposes[slot].matvec(&x);
                    if x.is_zero() {
                        break;
                    }
                }
                u = u.add(&x.scale(c));
            }
            (y, u)
        })
        .collect();
    let mut report = Report::new();
    let mut ok = true;
    let mut detail = String::new();
    for (p, (y, _)) in rows.iter().enumerate() {
        if *y != QVector::unit(n, p) && ok {
            ok = false;
            detail = format!("monomial {}", rep.basis()[p]);
        }
    }
    report.push(
        "ordered monomials applied to v are the basis vectors",
        ok,
        detail,
    );
    let mut g = QMatrix::zeros(n, n);
    for (i, (_, u)) in rows.iter().enumerate() {
        for (j, (y, _)) in rows.iter().enumerate() {
            let mut s = QScalar::zero();
            for (t, x) in u.iter() {
                if let Some(z) = y.get_ref(t) {
                    s += &(x * z);
                }
            }
            g.set(i, j, s);
        }
    }
    (g, report)
}
