//! Dual q-Krawtchouk polynomials in base `q^2`, evaluated on the lattice
//! `lambda(x) = q^{-2x} + c q^{2x - 2N}`.

use crate::exactq::{qpoch, qpoch_at, QScalar};

fn q(e: i64) -> QScalar {
    QScalar::q_pow(e)
}

pub fn lattice_point(x: u32, c: &QScalar, n: u32) -> QScalar {
    let (x, n) = (x as i64, n as i64);
    q(-2 * x) + c.shift_q(2 * x - 2 * n)
}

/// `r_0, ..., r_(lmax)` at `lambda(x)` from the three-term recurrence.
pub fn dual_q_krawtchouk_all(lmax: u32, x: u32, c: &QScalar, n: u32) -> Vec<QScalar> {
    let lam = lattice_point(x, c, n);
    let ni = n as i64;
    let one = QScalar::one();
    let one_plus_c = &one + c;
    let mut out = vec![one.clone()];
    let mut prev = QScalar::zero();
    for l in 0..lmax as i64 {
        let cur = out.last().unwrap().clone();
        let mid = (&lam - one_plus_c.shift_q(2 * l - 2 * ni)) * &cur;
        let low = c.shift_q(-2 * ni) * (&one - q(2 * l)) * (&one - q(2 * l - 2 * ni - 2)) * &prev;
        out.push(mid - low);
        prev = cur;
    }
    out
}

/// `r_l(lambda(x))`, normalised so that `r_l(lambda(0)) = (q^{-2N}; q^2)_l`.
pub fn dual_q_krawtchouk_r(l: u32, x: u32, c: &QScalar, n: u32) -> QScalar {
    dual_q_krawtchouk_all(l, x, c, n).pop().unwrap()
}

/// `r_l` from the terminating 2phi1 representation
/// `(Q^{x-N};Q)_l Q^{-lx} 2phi1(Q^-l, Q^-x; Q^{N-x-l+1}; Q, c Q^{x+1})`
/// with `Q = q^2`. `None` where a denominator factor vanishes.
pub fn dual_q_krawtchouk_2phi1(l: u32, x: u32, c: &QScalar, n: u32) -> Option<QScalar> {
    let (li, xi, ni) = (l as i64, x as i64, n as i64);
    let z = c.shift_q(2 * xi + 2);
    let mut sum = QScalar::zero();
    for k in 0..=l.min(x) {
        let den = qpoch(2 * (ni - xi - li + 1), 2, k) * qpoch(2, 2, k);
        if den.is_zero() {
            return None;
        }
        let term = qpoch(-2 * li, 2, k) * qpoch(-2 * xi, 2, k) * z.pow(k as i64).unwrap() / den;
        sum = sum + term;
    }
    Some(qpoch(2 * (xi - ni), 2, l).shift_q(-2 * li * xi) * sum)
}

/// `r_l` from `(Q^-N;Q)_l 3phi2(Q^-l, Q^-x, c Q^{x-N}; Q^-N, 0; Q, Q)`.
pub fn dual_q_krawtchouk_3phi2(l: u32, x: u32, c: &QScalar, n: u32) -> QScalar {
    let (li, xi, ni) = (l as i64, x as i64, n as i64);
    let third = c.shift_q(2 * xi - 2 * ni);
    let mut sum = QScalar::zero();
    for k in 0..=l.min(x) {
        let term = qpoch(-2 * li, 2, k) * qpoch(-2 * xi, 2, k) * qpoch_at(&third, 2, k)
            / (qpoch(-2 * ni, 2, k) * qpoch(2, 2, k));
        sum = sum + term.shift_q(2 * k as i64);
    }
    qpoch(-2 * ni, 2, l) * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_steps() {
        let c = -q(3);
        assert!(dual_q_krawtchouk_r(0, 2, &c, 4).is_one());
        let want = lattice_point(2, &c, 4) - (QScalar::one() + &c) * q(-8);
        assert_eq!(dual_q_krawtchouk_r(1, 2, &c, 4), want);
    }

    #[test]
    fn value_at_origin() {
        let c = QScalar::from_int(-2).shift_q(1);
        for n in 0..5 {
            for l in 0..=n {
                assert_eq!(dual_q_krawtchouk_r(l, 0, &c, n), qpoch(-2 * n as i64, 2, l));
            }
        }
    }

    #[test]
    fn routes_agree_small() {
        let c = -q(2);
        for n in 0..4 {
            for x in 0..=n {
                for l in 0..=n {
                    let r = dual_q_krawtchouk_r(l, x, &c, n);
                    assert_eq!(
                        r,
                        dual_q_krawtchouk_3phi2(l, x, &c, n),
                        "l={} x={} N={}",
                        l,
                        x,
                        n
                    );
                    if let Some(h) = dual_q_krawtchouk_2phi1(l, x, &c, n) {
                        assert_eq!(r, h, "l={} x={} N={}", l, x, n);
                    }
                }
            }
        }
    }
}
