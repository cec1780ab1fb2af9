//! Exact rational functions in a formal variable `q`.

mod laurent;
mod parse;
mod poly;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::atomic::{AtomicI64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use laurent::LaurentPoly;
pub use poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("q0 = {q0} is a pole")]
    Pole { q0: String },
    #[error("cannot evaluate at q0 = 0")]
    ZeroPoint,
    #[error("exponent {exp} exceeds the cap {cap}")]
    ExponentOverflow { exp: i64, cap: i64 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

static EXPONENT_CAP: AtomicI64 = AtomicI64::new(1_000_000);

pub fn exponent_cap() -> i64 {
    EXPONENT_CAP.load(Ordering::Relaxed)
}

pub fn set_exponent_cap(cap: i64) {
    EXPONENT_CAP.store(cap.max(1), Ordering::Relaxed);
}

fn check_exp(exp: i64) -> Result<(), QError> {
    let cap = exponent_cap();
    if exp.abs() > cap {
        Err(QError::ExponentOverflow { exp, cap })
    } else {
        Ok(())
    }
}

/// An element `coeff * q^shift * num(q) / den(q)` of Q(q).
///
/// `num` and `den` are coprime primitive integer polynomials with positive
/// leading coefficient and nonzero constant term, so two values are equal
/// iff their fields are equal. Zero has `coeff == 0`, `shift == 0` and
/// trivial polynomials.
#[derive(Clone, PartialEq, Eq)]
pub struct QScalar {
    coeff: BigRational,
    shift: i64,
    num: IntPoly,
    den: IntPoly,
}

impl Hash for QScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeff.numer().hash(state);
        self.coeff.denom().hash(state);
        self.shift.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QScalar({})", self)
    }
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar {
            coeff: BigRational::zero(),
            shift: 0,
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        QScalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        QScalar::from_rational(rat(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        if c.is_zero() {
            return QScalar::zero();
        }
        QScalar {
            coeff: c,
            shift: 0,
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn q() -> Self {
        QScalar::q_pow(1)
    }

    /// `q^e`. Panics past the exponent cap; see [`QScalar::try_q_pow`].
    pub fn q_pow(e: i64) -> Self {
        QScalar::try_q_pow(e).unwrap_or_else(|err| panic!("{}", err))
    }

    pub fn try_q_pow(e: i64) -> Result<Self, QError> {
        check_exp(e)?;
        Ok(QScalar {
            coeff: BigRational::one(),
            shift: e,
            num: IntPoly::one(),
            den: IntPoly::one(),
        })
    }

    /// `c * q^e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        QScalar::q_pow(e).scale_int(c)
    }

    /// Builds the canonical form from a numerator and denominator that are
    /// already coprime up to powers of q and integer content.
    fn assemble(
        coeff: BigRational,
        shift: i64,
        num: IntPoly,
        den: IntPoly,
    ) -> Result<Self, QError> {
        if coeff.is_zero() || num.is_zero() {
            return Ok(QScalar::zero());
        }
        let vn = num.valuation();
        let vd = den.valuation();
        let num = num.shift_down(vn);
        let den = den.shift_down(vd);
        let shift = shift + vn as i64 - vd as i64;
        let (cn, num) = num.primitive();
        let (cd, den) = den.primitive();
        let coeff = coeff * BigRational::new(cn, cd);
        check_exp(shift)?;
        check_exp((num.degree() + den.degree()) as i64)?;
        Ok(QScalar {
            coeff,
            shift,
            num,
            den,
        })
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        match p.to_parts() {
            None => QScalar::zero(),
            Some((c, s, prim)) => QScalar::assemble(c, s, prim, IntPoly::one())
                .unwrap_or_else(|err| panic!("{}", err)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// Numerator as a Laurent polynomial (carries the scale and q-power).
    pub fn numer(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly::from_parts(&self.coeff, self.shift, &self.num)
    }

    /// Denominator: a primitive polynomial with positive leading coefficient.
    pub fn denom(&self) -> LaurentPoly {
        LaurentPoly::from_parts(&BigRational::one(), 0, &self.den)
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Total number of nonzero polynomial terms; a crude size measure.
    pub fn size(&self) -> usize {
        if self.is_zero() {
            0
        } else {
            self.num.term_count() + self.den.term_count()
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&rat(BigInt::from(k)))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() || self.is_zero() {
            return QScalar::zero();
        }
        QScalar {
            coeff: &self.coeff * k,
            ..self.clone()
        }
    }

    /// Multiplies by `q^e`.
    pub fn shift_q(&self, e: i64) -> Self {
        if self.is_zero() {
            return QScalar::zero();
        }
        let shift = self.shift + e;
        check_exp(shift).unwrap_or_else(|err| panic!("{}", err));
        QScalar {
            shift,
            ..self.clone()
        }
    }

    pub fn try_add(&self, other: &QScalar) -> Result<QScalar, QError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let s = self.shift.min(other.shift);
        let g = IntPoly::gcd(&self.den, &other.den);
        let e1 = self.den.div_exact(&g).expect("gcd divides");
        let e2 = other.den.div_exact(&g).expect("gcd divides");
        let l = self.coeff.denom().lcm(other.coeff.denom());
        let k1 = self.coeff.numer() * (&l / self.coeff.denom());
        let k2 = other.coeff.numer() * (&l / other.coeff.denom());
        let t1 = self
            .num
            .mul(&e2)
            .shift_up((self.shift - s) as usize)
            .scale(&k1);
        let t2 = other
            .num
            .mul(&e1)
            .shift_up((other.shift - s) as usize)
            .scale(&k2);
        let p = t1.add(&t2);
        if p.is_zero() {
            return Ok(QScalar::zero());
        }
        let vp = p.valuation();
        let p = p.shift_down(vp);
        let (cp, p) = p.primitive();
        let (p, g) = if g.is_one() {
            (p, g)
        } else {
            let h = IntPoly::gcd(&p, &g);
            if h.is_one() {
                (p, g)
            } else {
                (p.div_exact(&h).unwrap(), g.div_exact(&h).unwrap())
            }
        };
        let den = g.mul(&e1).mul(&e2);
        QScalar::assemble(BigRational::new(cp, l), s + vp as i64, p, den)
    }

    pub fn try_mul(&self, other: &QScalar) -> Result<QScalar, QError> {
        if self.is_zero() || other.is_zero() {
            return Ok(QScalar::zero());
        }
        let coeff = &self.coeff * &other.coeff;
        let shift = self.shift + other.shift;
        if self.den.is_one() && other.den.is_one() {
            return QScalar::assemble(coeff, shift, self.num.mul(&other.num), IntPoly::one());
        }
        let (n1, d2) = cancel(&self.num, &other.den);
        let (n2, d1) = cancel(&other.num, &self.den);
        QScalar::assemble(coeff, shift, n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Result<QScalar, QError> {
        if self.is_zero() {
            return Err(QError::DivisionByZero);
        }
        QScalar::assemble(
            BigRational::one() / &self.coeff,
            -self.shift,
            self.den.clone(),
            self.num.clone(),
        )
    }

    pub fn checked_div(&self, other: &QScalar) -> Result<QScalar, QError> {
        self.try_mul(&other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<QScalar, QError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = QScalar::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact value at `q = q0`.
    pub fn evaluate_at(&self, q0: &BigRational) -> Result<BigRational, QError> {
        if q0.is_zero() {
            return Err(QError::ZeroPoint);
        }
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let (p, r) = (q0.numer(), q0.denom());
        let dv = self.den.eval_homogeneous(p, r);
        if dv.is_zero() {
            return Err(QError::Pole { q0: q0.to_string() });
        }
        let nv = self.num.eval_homogeneous(p, r);
        // num(q0)/den(q0) = nv r^(-dn) / (dv r^(-dd))
        let rdiff = self.den.degree() as i64 - self.num.degree() as i64;
        let mut val = BigRational::new(nv, dv) * rpow(q0.denom(), rdiff);
        val *= &self.coeff;
        val *= rpow_rat(q0, self.shift);
        Ok(val)
    }

    /// `Some((s, e))` iff the value is `s * q^e` with `s = ±1`.
    pub fn as_signed_monomial(&self) -> Option<(i8, i64)> {
        if !self.num.is_one() || !self.den.is_one() {
            return None;
        }
        if self.coeff.is_one() {
            Some((1, self.shift))
        } else if (-&self.coeff).is_one() {
            Some((-1, self.shift))
        } else {
            None
        }
    }

    /// `Some((c, e))` iff the value is `c * q^e`.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        if self.num.is_one() && self.den.is_one() && !self.is_zero() {
            Some((self.coeff.clone(), self.shift))
        } else {
            None
        }
    }
}

fn cancel(n: &IntPoly, d: &IntPoly) -> (IntPoly, IntPoly) {
    if n.is_one() || d.is_one() {
        return (n.clone(), d.clone());
    }
    let g = IntPoly::gcd(n, d);
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
    }
}

fn rpow(base: &BigInt, e: i64) -> BigRational {
    let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        rat(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn rpow_rat(base: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

impl Default for QScalar {
    fn default() -> Self {
        QScalar::zero()
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "({})/({})", self.numer(), self.denom())
        }
    }
}

impl FromStr for QScalar {
    type Err = QError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse(s)
    }
}

impl serde::Serialize for QScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for QScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        QScalar::from_int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&QScalar> for &QScalar {
            type Output = QScalar;
            fn $m(self, rhs: &QScalar) -> QScalar {
                let f: fn(&QScalar, &QScalar) -> QScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: &QScalar) -> QScalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<QScalar> for &QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a
    .try_add(b)
    .unwrap_or_else(|e| panic!("{}", e)));
binop!(Sub, sub, |a, b| a
    .try_add(&-b)
    .unwrap_or_else(|e| panic!("{}", e)));
binop!(Mul, mul, |a, b| a
    .try_mul(b)
    .unwrap_or_else(|e| panic!("{}", e)));
binop!(Div, div, |a, b| a
    .checked_div(b)
    .unwrap_or_else(|e| panic!("{}", e)));

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            coeff: -&self.coeff,
            ..self.clone()
        }
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&QScalar> for QScalar {
    fn mul_assign(&mut self, rhs: &QScalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for QScalar {
    fn sum<I: Iterator<Item = QScalar>>(iter: I) -> Self {
        iter.fold(QScalar::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for QScalar {
    fn product<I: Iterator<Item = QScalar>>(iter: I) -> Self {
        iter.fold(QScalar::one(), |a, b| a * b)
    }
}

/// `q^e - q^-e`.
pub fn qbr(e: i64) -> QScalar {
    QScalar::q_pow(e) - QScalar::q_pow(-e)
}

/// `[n]_q = (q^n - q^-n)/(q - q^-1)`.
pub fn qint(n: i64) -> QScalar {
    if n == 0 {
        return QScalar::zero();
    }
    if n < 0 {
        return -qint(-n);
    }
    let mut p = LaurentPoly::zero();
    for j in 0..n {
        p.add_term(2 * j - (n - 1), BigRational::one());
    }
    QScalar::from_laurent(&p)
}

/// `[n]_q!`.
pub fn qfactorial(n: u32) -> QScalar {
    (1..=n as i64).map(qint).product()
}

/// `1 - q^e`.
pub fn one_minus_q(e: i64) -> QScalar {
    QScalar::one() - QScalar::q_pow(e)
}

/// `(q^a; q^step)_n = prod_{j<n} (1 - q^(a + j*step))`.
pub fn qpoch(a: i64, step: i64, n: u32) -> QScalar {
    let mut acc = QScalar::one();
    for j in 0..n as i64 {
        let e = a + j * step;
        if e == 0 {
            return QScalar::zero();
        }
        acc = acc * one_minus_q(e);
    }
    acc
}

/// `(x; q^step)_n` for a general base point `x`.
pub fn qpoch_at(x: &QScalar, step: i64, n: u32) -> QScalar {
    let mut acc = QScalar::one();
    let mut t = x.clone();
    for _ in 0..n {
        acc = acc * (QScalar::one() - &t);
        if acc.is_zero() {
            break;
        }
        t = t.shift_q(step);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn q(e: i64) -> QScalar {
        QScalar::q_pow(e)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn difference_of_squares() {
        let lhs = (q(1) - q(-1)) * (q(1) + q(-1));
        assert_eq!(lhs, q(2) - q(-2));
        assert_eq!(lhs.to_string(), "q^2 - q^-2");
    }

    #[test]
    fn self_division_is_one() {
        let x = (q(3) - QScalar::from_int(2)) / (q(1) + q(-4));
        assert!((&x / &x).is_one());
    }

    #[test]
    fn cancellation_to_polynomial() {
        let x = one_minus_q(4) / one_minus_q(2);
        assert_eq!(x, QScalar::one() + q(2));
        assert!(x.is_laurent());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            QScalar::one().checked_div(&QScalar::zero()),
            Err(QError::DivisionByZero)
        );
        assert_eq!(QScalar::zero().inv(), Err(QError::DivisionByZero));
    }

    #[test]
    fn qint_values() {
        assert!(qint(0).is_zero());
        assert!(qint(1).is_one());
        assert_eq!(qint(2), q(1) + q(-1));
        assert_eq!(qint(-3), -qint(3));
        assert_eq!(qint(5), qbr(5) / qbr(1));
    }

    #[test]
    fn qpoch_values() {
        assert!(qpoch(2, 2, 0).is_one());
        assert_eq!(qpoch(2, 2, 1), one_minus_q(2));
        assert!(qpoch(-2, 2, 2).is_zero());
        assert_eq!(qpoch_at(&q(3), 1, 2), one_minus_q(3) * one_minus_q(4));
    }

    #[test]
    fn evaluation() {
        assert_eq!((q(1) + q(-1)).evaluate_at(&r(1, 2)).unwrap(), r(5, 2));
        assert_eq!(qint(3).evaluate_at(&r(1, 2)).unwrap(), r(21, 4));
        let x = QScalar::one() / one_minus_q(2);
        assert!(matches!(x.evaluate_at(&r(1, 1)), Err(QError::Pole { .. })));
        assert_eq!(x.evaluate_at(&r(0, 1)), Err(QError::ZeroPoint));
        let y = (q(-3) - QScalar::from_int(7)) / (QScalar::from_int(2) + q(5));
        let expect = (r(27, 1) - r(7, 1)) / (r(2, 1) + r(1, 243));
        assert_eq!(y.evaluate_at(&r(1, 3)).unwrap(), expect);
    }

    #[test]
    fn signed_monomials() {
        assert_eq!(QScalar::monomial(-1, 5).as_signed_monomial(), Some((-1, 5)));
        assert_eq!(q(-1).as_signed_monomial(), Some((1, -1)));
        assert_eq!((QScalar::one() + q(1)).as_signed_monomial(), None);
        assert_eq!(QScalar::monomial(2, 1).as_signed_monomial(), None);
        assert_eq!((q(3) / q(5)).as_signed_monomial(), Some((1, -2)));
    }

    #[test]
    fn canonical_denominator() {
        let x =
            QScalar::from_int(3) / (QScalar::from_int(-2) * q(-2) + QScalar::from_int(4) * q(1));
        let d = x.denom();
        assert!(d.min_exp().unwrap() >= 0);
        let (_, _, prim) = d.to_parts().unwrap();
        assert_eq!(LaurentPoly::from_parts(&BigRational::one(), 0, &prim), d);
        assert!(d.terms().values().next_back().unwrap().is_positive());
    }

    #[test]
    fn exponent_cap_trips() {
        assert!(matches!(
            QScalar::try_q_pow(2_000_000),
            Err(QError::ExponentOverflow { .. })
        ));
    }

    #[test]
    fn display_forms() {
        assert_eq!(QScalar::zero().to_string(), "0");
        assert_eq!(
            (q(3) - QScalar::from_int(2) + q(-1)).to_string(),
            "q^3 - 2 + q^-1"
        );
        let x = QScalar::one() / (QScalar::one() - q(2));
        assert_eq!(x.to_string(), "(-1)/(q^2 - 1)");
        assert_eq!(
            QScalar::from_rational(r(-3, 2)).shift_q(1).to_string(),
            "-3/2*q"
        );
    }

    fn arb_scalar() -> impl Strategy<Value = QScalar> {
        let term = (-3i64..=3, -4i64..=4);
        let lp = prop::collection::vec(term, 1..4).prop_map(|ts| {
            let mut p = LaurentPoly::zero();
            for (c, e) in ts {
                p.add_term(e, BigRational::from_integer(c.into()));
            }
            QScalar::from_laurent(&p)
        });
        (lp.clone(), lp).prop_map(|(a, b)| if b.is_zero() { a } else { a / b })
    }

    fn arb_q0() -> impl Strategy<Value = BigRational> {
        (1i64..50, 51i64..97).prop_map(|(n, d)| r(n, d))
    }

    proptest! {
        #[test]
        fn evaluation_is_a_homomorphism(x in arb_scalar(), y in arb_scalar(), q0 in arb_q0()) {
            if let (Ok(a), Ok(b)) = (x.evaluate_at(&q0), y.evaluate_at(&q0)) {
                prop_assert_eq!((&x * &y).evaluate_at(&q0).unwrap(), &a * &b);
                prop_assert_eq!((&x + &y).evaluate_at(&q0).unwrap(), &a + &b);
            }
        }

        #[test]
        fn canonical_form_is_normal(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!((&x + &y) * &z, &x * &z + &y * &z);
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x.clone());
            }
        }

        #[test]
        fn text_round_trip(x in arb_scalar()) {
            let back: QScalar = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn qpoch_step(a in -6i64..6, s in 1i64..3, n in 0u32..5) {
            let e = a + n as i64 * s;
            prop_assert_eq!(qpoch(a, s, n + 1), qpoch(a, s, n) * one_minus_q(e));
        }
    }
}
