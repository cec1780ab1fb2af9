use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IntPoly;

/// Sparse Laurent polynomial in `q` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn monomial(c: BigRational, e: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(e, c);
        p
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `coeff * q^shift * p(q)`.
    pub fn from_parts(coeff: &BigRational, shift: i64, p: &IntPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.add_term(
                    shift + i as i64,
                    coeff * BigRational::from_integer(c.clone()),
                );
            }
        }
        out
    }

    /// Splits into `(scale, shift, primitive integer polynomial)` with
    /// positive leading coefficient and nonzero constant term.
    pub fn to_parts(&self) -> Option<(BigRational, i64, IntPoly)> {
        let lo = self.min_exp()?;
        let hi = self.max_exp().unwrap();
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = num_integer::Integer::lcm(&denom_lcm, c.denom());
        }
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            coeffs[(e - lo) as usize] = c.numer() * (&denom_lcm / c.denom());
        }
        let (content, prim) = IntPoly::from_coeffs(coeffs).primitive();
        Some((BigRational::new(content, denom_lcm), lo, prim))
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, first: bool, e: i64, c: &BigRational) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if e == 0 {
        return write!(f, "{}", a);
    }
    if !a.is_one() {
        write!(f, "{}*", a)?;
    }
    if e == 1 {
        write!(f, "q")
    } else {
        write!(f, "q^{}", e)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            write_term(f, n == 0, *e, c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn display_descending() {
        let p = LaurentPoly::monomial(r(1), 3)
            .add(&LaurentPoly::monomial(r(-2), 0))
            .add(&LaurentPoly::monomial(r(1), -1));
        assert_eq!(p.to_string(), "q^3 - 2 + q^-1");
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = LaurentPoly::monomial(r(1), 2).add(&LaurentPoly::monomial(r(-1), 2));
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn parts_round_trip() {
        let p = LaurentPoly::monomial(BigRational::new(3.into(), 2.into()), -2)
            .add(&LaurentPoly::monomial(r(-3), 1));
        let (c, s, prim) = p.to_parts().unwrap();
        assert_eq!(LaurentPoly::from_parts(&c, s, &prim), p);
    }
}
