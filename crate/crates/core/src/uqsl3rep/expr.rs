use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use super::rep::{Gen, RepSpace};
use crate::exactq::{qbr, QScalar};
use crate::linalg::{QMatrix, QVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sym {
    G(Gen),
    F3,
    E3,
    F3hat(i64),
    E3hat(i64),
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::G(g) => write!(f, "{}", g),
            Sym::F3 => write!(f, "F3"),
            Sym::E3 => write!(f, "E3"),
            Sym::F3hat(a) => write!(f, "F3hat[{}]", a),
            Sym::E3hat(a) => write!(f, "E3hat[{}]", a),
        }
    }
}

pub const E1: Sym = Sym::G(Gen::E1);
pub const E2: Sym = Sym::G(Gen::E2);
pub const F1: Sym = Sym::G(Gen::F1);
pub const F2: Sym = Sym::G(Gen::F2);
pub const K1: Sym = Sym::G(Gen::K1);
pub const K1INV: Sym = Sym::G(Gen::K1inv);
pub const K2: Sym = Sym::G(Gen::K2);
pub const K2INV: Sym = Sym::G(Gen::K2inv);

/// Formal linear combination of words. In a word the leftmost symbol acts
/// last.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgExpr {
    terms: Vec<(QScalar, Vec<Sym>)>,
}

impl AlgExpr {
    pub fn zero() -> Self {
        AlgExpr::default()
    }

    pub fn one() -> Self {
        AlgExpr::word(vec![])
    }

    pub fn scalar(c: QScalar) -> Self {
        AlgExpr::term(c, vec![])
    }

    pub fn sym(s: Sym) -> Self {
        AlgExpr::word(vec![s])
    }

    pub fn word(w: Vec<Sym>) -> Self {
        AlgExpr::term(QScalar::one(), w)
    }

    pub fn term(c: QScalar, w: Vec<Sym>) -> Self {
        let mut e = AlgExpr::zero();
        if !c.is_zero() {
            e.terms.push((c, w));
        }
        e
    }

    pub fn terms(&self) -> &[(QScalar, Vec<Sym>)] {
        &self.terms
    }

    pub fn add(&self, other: &AlgExpr) -> AlgExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        AlgExpr { terms }.collect()
    }

    pub fn sub(&self, other: &AlgExpr) -> AlgExpr {
        self.add(&other.scale(&QScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &QScalar) -> AlgExpr {
        AlgExpr {
            terms: self
                .terms
                .iter()
                .map(|(x, w)| (x * c, w.clone()))
                .filter(|(x, _)| !x.is_zero())
                .collect(),
        }
    }

    /// Product `self * other`: `other` acts first.
    pub fn mul(&self, other: &AlgExpr) -> AlgExpr {
        let mut terms = Vec::new();
        for (c1, w1) in &self.terms {
            for (c2, w2) in &other.terms {
                let mut w = w1.clone();
                w.extend(w2.iter().copied());
                terms.push((c1 * c2, w));
            }
        }
        AlgExpr { terms }.collect()
    }

    pub fn pow(&self, n: u32) -> AlgExpr {
        (0..n).fold(AlgExpr::one(), |acc, _| acc.mul(self))
    }

    /// Merges repeated words.
    fn collect(self) -> AlgExpr {
        let mut order: Vec<Vec<Sym>> = Vec::new();
        let mut acc: HashMap<Vec<Sym>, QScalar> = HashMap::new();
        for (c, w) in self.terms {
            match acc.get_mut(&w) {
                Some(x) => *x += &c,
                None => {
                    order.push(w.clone());
                    acc.insert(w, c);
                }
            }
        }
        AlgExpr {
            terms: order
                .into_iter()
                .filter_map(|w| {
                    let c = acc.remove(&w).unwrap();
                    (!c.is_zero()).then_some((c, w))
                })
                .collect(),
        }
    }

    /// Rewrites composite symbols in terms of the eight generators.
    pub fn expand(&self) -> AlgExpr {
        let mut out = AlgExpr::zero();
        for (c, w) in &self.terms {
            let mut t = AlgExpr::scalar(c.clone());
            for s in w {
                t = t.mul(&expand_sym(*s));
            }
            out = out.add(&t);
        }
        out
    }

    /// Image under the antilinear anti-automorphism with
    /// `E_i -> K_i F_i`, `F_i -> E_i K_i^-1`, `K -> K`. Scalars are treated
    /// as real.
    pub fn star(&self) -> AlgExpr {
        let mut out = AlgExpr::zero();
        for (c, w) in &self.expand().terms {
            let mut t = AlgExpr::scalar(c.clone());
            for s in w.iter().rev() {
                let Sym::G(g) = s else {
                    unreachable!("expanded")
                };
                t = t.mul(&star_gen(*g));
            }
            out = out.add(&t);
        }
        out
    }
}

impl fmt::Display for AlgExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, w)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", c)?;
            for s in w {
                write!(f, "*{}", s)?;
            }
        }
        Ok(())
    }
}

/// `(q^a K2 - q^-a K2^-1)/(q - q^-1)`.
pub fn p_k2(a: i64) -> AlgExpr {
    let d = qbr(1);
    AlgExpr::term(QScalar::q_pow(a) / &d, vec![K2])
        .add(&AlgExpr::term(-(QScalar::q_pow(-a) / &d), vec![K2INV]))
}

/// `(q^a K1 K2 - q^-a (K1 K2)^-1)/(q - q^-1)`.
pub fn p_k12(a: i64) -> AlgExpr {
    let d = qbr(1);
    AlgExpr::term(QScalar::q_pow(a) / &d, vec![K1, K2]).add(&AlgExpr::term(
        -(QScalar::q_pow(-a) / &d),
        vec![K1INV, K2INV],
    ))
}

/// `(q^a K - q^-a K^-1)/(q - q^-1)` for `K = K_i`.
pub fn p_ki(i: u8, a: i64) -> AlgExpr {
    let (k, kinv) = if i == 1 { (K1, K1INV) } else { (K2, K2INV) };
    let d = qbr(1);
    AlgExpr::term(QScalar::q_pow(a) / &d, vec![k])
        .add(&AlgExpr::term(-(QScalar::q_pow(-a) / &d), vec![kinv]))
}

fn expand_sym(s: Sym) -> AlgExpr {
    let q = QScalar::q();
    match s {
        Sym::G(_) => AlgExpr::sym(s),
        Sym::F3 => AlgExpr::word(vec![F1, F2]).sub(&AlgExpr::term(q, vec![F2, F1])),
        Sym::E3 => AlgExpr::word(vec![E2, E1]).sub(&AlgExpr::term(q, vec![E1, E2])),
        Sym::F3hat(a) => AlgExpr::word(vec![F1, F2])
            .mul(&p_k2(a + 1))
            .sub(&AlgExpr::word(vec![F2, F1]).mul(&p_k2(a))),
        Sym::E3hat(a) => p_k2(a + 1)
            .mul(&AlgExpr::word(vec![E2, E1]))
            .sub(&p_k2(a).mul(&AlgExpr::word(vec![E1, E2]))),
    }
}

fn star_gen(g: Gen) -> AlgExpr {
    match g {
        Gen::E1 => AlgExpr::word(vec![K1, F1]),
        Gen::E2 => AlgExpr::word(vec![K2, F2]),
        Gen::F1 => AlgExpr::word(vec![E1, K1INV]),
        Gen::F2 => AlgExpr::word(vec![E2, K2INV]),
        _ => AlgExpr::sym(Sym::G(g)),
    }
}

/// Evaluates expressions on a fixed module, caching composite symbols.
pub struct Evaluator<'a> {
    rep: &'a RepSpace,
    cache: Mutex<HashMap<Sym, QMatrix>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(rep: &'a RepSpace) -> Self {
        Evaluator {
            rep,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn rep(&self) -> &RepSpace {
        self.rep
    }

    pub fn sym_matrix(&self, s: Sym) -> QMatrix {
        if let Sym::G(g) = s {
            return self.rep.gen(g).clone();
        }
        if let Some(m) = self.cache.lock().unwrap().get(&s) {
            return m.clone();
        }
        let m = self.eval(&expand_sym(s));
        self.cache.lock().unwrap().insert(s, m.clone());
        m
    }

    pub fn eval(&self, e: &AlgExpr) -> QMatrix {
        let n = self.rep.dim();
        let mut out = QMatrix::zeros(n, n);
        for (c, w) in e.terms() {
            let mut m = QMatrix::scalar(n, c);
            for s in w {
                m = match s {
                    Sym::G(g) => m.matmul(self.rep.gen(*g)),
                    _ => m.matmul(&self.sym_matrix(*s)),
                };
            }
            out = out.add(&m);
        }
        out
    }

    /// `e` applied to a vector, one matrix-vector product per symbol.
    pub fn apply(&self, e: &AlgExpr, v: &QVector) -> QVector {
        let mut out = QVector::zeros(v.dim());
        for (c, w) in e.terms() {
            let mut x = v.clone();
            for s in w.iter().rev() {
                x = match s {
                    Sym::G(g) => self.rep.gen(*g).matvec(&x),
                    _ => self.sym_matrix(*s).matvec(&x),
                };
                if x.is_zero() {
                    break;
                }
            }
            out = out.add(&x.scale(c));
        }
        out
    }
}

/// Homomorphic evaluation of an expression on `rep`.
pub fn eval_expr(rep: &RepSpace, e: &AlgExpr) -> QMatrix {
    Evaluator::new(rep).eval(e)
}
