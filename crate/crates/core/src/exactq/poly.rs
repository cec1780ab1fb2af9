//! Dense univariate polynomials over the integers.
//!
//! This is the workhorse under [`QScalar`](super::QScalar): numerators and
//! denominators are kept as primitive integer polynomials so that
//! cancellation reduces to integer-polynomial gcd.

use std::cmp::{max, min};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending degree order. The zero polynomial is the empty
/// vector; otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = IntPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPoly { coeffs }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Divides by `x^k`; the caller guarantees `k <= valuation()`.
    pub fn shift_down(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        if k.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Primitive part with positive leading coefficient, and the signed
    /// content that was removed.
    pub fn primitive(&self) -> (BigInt, IntPoly) {
        if self.is_zero() {
            return (BigInt::zero(), IntPoly::zero());
        }
        let mut c = self.content();
        if self.lead().map(|l| l.is_negative()).unwrap_or(false) {
            c = -c;
        }
        (c.clone(), self.div_scalar_exact(&c))
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = max(self.len(), other.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let c = match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            coeffs.push(c);
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); self.len() + other.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Homogenised evaluation at `p/r`: returns `sum c_i p^i r^(d-i)` where
    /// `d` is the degree.
    pub fn eval_homogeneous(&self, p: &BigInt, r: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut rpow = BigInt::one();
        // Horner in p with the r powers applied from the top coefficient down.
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &rpow;
            rpow *= r;
        }
        // The loop multiplied c_i by r^(d-i) exactly once per step.
        acc
    }

    fn max_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Exact division `self / d` over the integers; `None` if `d` does not
    /// divide `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if d.is_one() {
            return Some(self.clone());
        }
        if self.len() < d.len() {
            return None;
        }
        let dl = d.lead().unwrap();
        let mut rem = self.coeffs.clone();
        let qlen = self.len() - d.len() + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = &rem[k + d.len() - 1];
            if top.is_zero() {
                continue;
            }
            let (qk, r) = top.div_rem(dl);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + j] -= &qk * dc;
                }
            }
            quot[k] = qk;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(quot))
    }

    /// Pseudo-remainder of `self` by `d`.
    fn prem(&self, d: &IntPoly) -> IntPoly {
        if self.len() < d.len() {
            return self.clone();
        }
        let dl = d.lead().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let dn = d.len();
        let mut top = rem.len();
        while top >= dn {
            let lc = rem[top - 1].clone();
            if lc.is_zero() {
                top -= 1;
                continue;
            }
            for c in rem[..top].iter_mut() {
                *c *= &dl;
            }
            let off = top - dn;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[off + j] -= &lc * dc;
            }
            top -= 1;
        }
        rem.truncate(dn - 1);
        IntPoly::from_coeffs(rem)
    }

    /// Recovers a polynomial from its value at `xi` using symmetric
    /// `xi`-adic digits.
    fn from_xi_adic(mut v: BigInt, xi: &BigInt) -> IntPoly {
        let half = xi / 2;
        let mut coeffs = Vec::new();
        while !v.is_zero() {
            let mut d = v.mod_floor(xi);
            if d > half {
                d -= xi;
            }
            coeffs.push(d.clone());
            v = (v - d) / xi;
        }
        IntPoly::from_coeffs(coeffs)
    }

    fn heuristic_gcd(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
        let two = BigInt::from(2);
        let mut xi = min(a.max_norm(), b.max_norm()) * &two + BigInt::from(29);
        let dmax = max(a.degree(), b.degree()) as u64;
        for _ in 0..6 {
            if xi.bits() * (dmax + 1) > 40_000 {
                return None;
            }
            let gamma = a.eval(&xi).gcd(&b.eval(&xi));
            let (_, g) = IntPoly::from_xi_adic(gamma, &xi).primitive();
            if !g.is_zero() && a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                return Some(g);
            }
            xi = xi * BigInt::from(73794) / BigInt::from(27011);
        }
        None
    }

    fn prs_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
        let (mut a, mut b) = if a.len() >= b.len() {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = r.primitive().1;
        }
        a.primitive().1
    }

    /// Gcd of two primitive polynomials, normalised primitive with positive
    /// leading coefficient.
    pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
        if a.is_zero() {
            return b.primitive().1;
        }
        if b.is_zero() {
            return a.primitive().1;
        }
        if a.len() == 1 || b.len() == 1 {
            return IntPoly::one();
        }
        if a == b {
            return a.primitive().1;
        }
        if let Some(q) = a.div_exact(b) {
            let _ = q;
            return b.primitive().1;
        }
        if let Some(q) = b.div_exact(a) {
            let _ = q;
            return a.primitive().1;
        }
        match IntPoly::heuristic_gcd(a, b) {
            Some(g) => g,
            None => IntPoly::prs_gcd(a, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn gcd_of_products_recovers_common_factor() {
        let f = p(&[1, 0, -1]); // 1 - x^2
        let g = p(&[1, 1, 1]);
        let h = p(&[2, -3, 0, 1]);
        let a = f.mul(&g);
        let b = f.mul(&h);
        assert_eq!(IntPoly::gcd(&a, &b), f.primitive().1);
        assert_eq!(IntPoly::prs_gcd(&a, &b), f.primitive().1);
    }

    #[test]
    fn coprime_gives_one() {
        assert!(IntPoly::gcd(&p(&[1, 1]), &p(&[1, -1])).is_one());
    }

    #[test]
    fn exact_division_detects_remainder() {
        let a = p(&[1, 0, -1]);
        assert_eq!(a.div_exact(&p(&[1, 1])), Some(p(&[1, -1])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
    }

    #[test]
    fn homogeneous_eval_matches_rational_eval() {
        // 3 - 2x + x^2 at 1/2: 3 - 1 + 1/4 = 9/4 -> times 2^2 = 9
        let a = p(&[3, -2, 1]);
        assert_eq!(
            a.eval_homogeneous(&BigInt::from(1), &BigInt::from(2)),
            BigInt::from(9)
        );
    }

    #[test]
    fn heuristic_and_prs_agree_on_cyclotomic_mix() {
        // (1 - x^6)(1 + x^3) and (1 - x^4)(1 - x^6)
        let a = p(&[1, 0, 0, 0, 0, 0, -1]).mul(&p(&[1, 0, 0, 1]));
        let b = p(&[1, 0, 0, 0, -1]).mul(&p(&[1, 0, 0, 0, 0, 0, -1]));
        let g1 = IntPoly::gcd(&a, &b);
        let g2 = IntPoly::prs_gcd(&a, &b);
        assert_eq!(g1, g2);
        assert!(a.div_exact(&g1).is_some());
    }
}
