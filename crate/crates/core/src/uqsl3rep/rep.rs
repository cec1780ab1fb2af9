use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::{enumerate_basis, norm_h, ActionCoeffs, BasisIndex, Weight};
use crate::exactq::{QError, QScalar};
use crate::linalg::{QMatrix, QVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    E1,
    E2,
    F1,
    F2,
    K1,
    K1inv,
    K2,
    K2inv,
}

impl Gen {
    pub const ALL: [Gen; 8] = [
        Gen::E1,
        Gen::E2,
        Gen::F1,
        Gen::F2,
        Gen::K1,
        Gen::K1inv,
        Gen::K2,
        Gen::K2inv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Gen::E1 => "E1",
            Gen::E2 => "E2",
            Gen::F1 => "F1",
            Gen::F2 => "F2",
            Gen::K1 => "K1",
            Gen::K1inv => "K1inv",
            Gen::K2 => "K2",
            Gen::K2inv => "K2inv",
        }
    }

    fn slot(self) -> usize {
        Gen::ALL.iter().position(|g| *g == self).unwrap()
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gen {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Gen::ALL
            .iter()
            .copied()
            .find(|g| g.name() == s)
            .ok_or_else(|| format!("unknown generator {}", s))
    }
}

/// Matrix of a generator on `V_lambda`; column `j` holds the image of the
/// `j`-th basis vector. Targets outside the index ranges are dropped.
pub fn generator_matrix(w: Weight, g: Gen) -> QMatrix {
    let basis = enumerate_basis(w);
    let index_of: HashMap<BasisIndex, usize> =
        basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    generator_matrix_with(w, g, &basis, &index_of)
}

fn generator_matrix_with(
    w: Weight,
    g: Gen,
    basis: &[BasisIndex],
    index_of: &HashMap<BasisIndex, usize>,
) -> QMatrix {
    let c = ActionCoeffs::new(w);
    let n = basis.len();
    let cols: Vec<Vec<(usize, QScalar)>> = basis
        .par_iter()
        .map(|src| {
            let (k, l, m) = (src.k as i64, src.l as i64, src.m as i64);
            let mut out = Vec::new();
            let mut put = |tk: i64, tl: i64, tm: i64, f: &dyn Fn() -> QScalar| {
                if let Some(t) = BasisIndex::try_from_signed(tk, tl, tm) {
                    if let Some(&row) = index_of.get(&t) {
                        let v = f();
                        if !v.is_zero() {
                            out.push((row, v));
                        }
                    }
                }
            };
            match g {
                Gen::K1 => put(k, l, m, &|| QScalar::q_pow(c.k1_exponent(k, l, m))),
                Gen::K1inv => put(k, l, m, &|| QScalar::q_pow(-c.k1_exponent(k, l, m))),
                Gen::K2 => put(k, l, m, &|| QScalar::q_pow(c.k2_exponent(k, l, m))),
                Gen::K2inv => put(k, l, m, &|| QScalar::q_pow(-c.k2_exponent(k, l, m))),
                Gen::F1 => {
                    put(k, l, m + 1, &|| c.a(k, l, m));
                    put(k - 1, l + 1, m, &|| c.b(k, l, m));
                }
                Gen::E1 => {
                    put(k, l, m - 1, &|| c.alpha(k, l, m));
                    put(k + 1, l - 1, m, &|| c.beta(k, l, m));
                }
                Gen::F2 => put(k + 1, l, m, &QScalar::one),
                Gen::E2 => put(k - 1, l, m, &|| c.eta(k, l, m)),
            }
            out
        })
        .collect();
    QMatrix::from_triplets(
        n,
        n,
        cols.into_iter()
            .enumerate()
            .flat_map(|(col, es)| es.into_iter().map(move |(r, v)| (r, col, v))),
    )
}

/// The irreducible module `V_lambda` in the basis of ordered monomials.
#[derive(Clone, Debug)]
pub struct RepSpace {
    weight: Weight,
    basis: Vec<BasisIndex>,
    index_of: HashMap<BasisIndex, usize>,
    norms: Vec<QScalar>,
    gens: Vec<QMatrix>,
}

impl RepSpace {
    pub fn new(w: Weight) -> Self {
        let basis = enumerate_basis(w);
        let index_of: HashMap<BasisIndex, usize> =
            basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let norms: Vec<QScalar> = basis
            .par_iter()
            .map(|b| norm_h(w, *b).expect("basis index in range"))
            .collect();
        let gens = Gen::ALL
            .iter()
            .map(|g| generator_matrix_with(w, *g, &basis, &index_of))
            .collect();
        RepSpace {
            weight: w,
            basis,
            index_of,
            norms,
            gens,
        }
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisIndex] {
        &self.basis
    }

    pub fn norms(&self) -> &[QScalar] {
        &self.norms
    }

    pub fn gen(&self, g: Gen) -> &QMatrix {
        &self.gens[g.slot()]
    }

    pub fn position(&self, idx: BasisIndex) -> Option<usize> {
        self.index_of.get(&idx).copied()
    }

    pub fn position_signed(&self, k: i64, l: i64, m: i64) -> Option<usize> {
        BasisIndex::try_from_signed(k, l, m).and_then(|b| self.position(b))
    }

    pub fn basis_vector(&self, idx: BasisIndex) -> Option<QVector> {
        self.position(idx).map(|p| QVector::unit(self.dim(), p))
    }

    /// Diagonal matrix of squared norms.
    pub fn norm_matrix(&self) -> QMatrix {
        QMatrix::diag(&self.norms)
    }

    /// Multiplies the first stored coefficient of `g` by `q` and returns its
    /// position. Used to show that the verifiers catch corruption.
    pub fn inject_fault(&mut self, g: Gen) -> Option<(usize, usize)> {
        let m = &mut self.gens[g.slot()];
        let (r, c, x) = m.first_nonzero().map(|(r, c, x)| (r, c, x.clone()))?;
        m.set(r, c, x.shift_q(1));
        Some((r, c))
    }

    pub fn to_json(&self) -> RepJson {
        let mut generators = BTreeMap::new();
        for g in Gen::ALL {
            let triples = self
                .gen(g)
                .entries()
                .map(|(r, c, x)| (r, c, x.to_string()))
                .collect();
            generators.insert(g.name().to_string(), triples);
        }
        RepJson {
            lambda: [self.weight.lambda1, self.weight.lambda2],
            basis: self.basis.iter().map(|b| [b.k, b.l, b.m]).collect(),
            norms: self.norms.iter().map(|x| x.to_string()).collect(),
            generators,
        }
    }

    pub fn from_json(j: &RepJson) -> Result<Self, RepJsonError> {
        let w = Weight::new(j.lambda[0], j.lambda[1]);
        let basis: Vec<BasisIndex> = j
            .basis
            .iter()
            .map(|b| BasisIndex::new(b[0], b[1], b[2]))
            .collect();
        let n = basis.len();
        if j.norms.len() != n {
            return Err(RepJsonError::Shape("norm table length".into()));
        }
        let index_of = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let norms = j
            .norms
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<QScalar>, QError>>()?;
        let mut gens = Vec::new();
        for g in Gen::ALL {
            let triples = j
                .generators
                .get(g.name())
                .ok_or_else(|| RepJsonError::Shape(format!("missing generator {}", g)))?;
            let mut m = QMatrix::zeros(n, n);
            for (r, c, s) in triples {
                if *r >= n || *c >= n {
                    return Err(RepJsonError::Shape(format!(
                        "entry ({}, {}) out of range",
                        r, c
                    )));
                }
                m.set(*r, *c, s.parse()?);
            }
            gens.push(m);
        }
        Ok(RepSpace {
            weight: w,
            basis,
            index_of,
            norms,
            gens,
        })
    }

    /// Field-by-field equality including matrices.
    pub fn same_as(&self, other: &RepSpace) -> bool {
        self.weight == other.weight
            && self.basis == other.basis
            && self.norms == other.norms
            && self.gens == other.gens
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub lambda: [u32; 2],
    pub basis: Vec<[u32; 3]>,
    pub norms: Vec<String>,
    pub generators: BTreeMap<String, Vec<(usize, usize, String)>>,
}

#[derive(Debug, thiserror::Error)]
pub enum RepJsonError {
    #[error("malformed representation: {0}")]
    Shape(String),
    #[error(transparent)]
    Scalar(#[from] QError),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i64) -> QScalar {
        QScalar::q_pow(e)
    }

    #[test]
    fn k1_on_fundamental() {
        let m = generator_matrix(Weight::new(1, 0), Gen::K1);
        assert_eq!(m, QMatrix::diag(&[q(1), q(-1), q(0)]));
    }

    #[test]
    fn f2_on_fundamental() {
        let m = generator_matrix(Weight::new(1, 0), Gen::F2);
        assert_eq!(m.nnz(), 1);
        assert!(m.get(2, 1).is_one());
    }

    #[test]
    fn e1_kills_trivial() {
        assert!(generator_matrix(Weight::new(0, 0), Gen::E1).is_zero());
    }

    #[test]
    fn at_most_two_entries_per_column() {
        let rep = RepSpace::new(Weight::new(2, 3));
        for g in Gen::ALL {
            let t = rep.gen(g).transpose();
            for c in 0..rep.dim() {
                assert!(t.row(c).len() <= 2);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let rep = RepSpace::new(Weight::new(1, 1));
        let text = serde_json::to_string(&rep.to_json()).unwrap();
        let back: RepJson = serde_json::from_str(&text).unwrap();
        assert!(RepSpace::from_json(&back).unwrap().same_as(&rep));
    }

    #[test]
    fn fault_injection_changes_matrix() {
        let mut rep = RepSpace::new(Weight::new(1, 0));
        let before = rep.gen(Gen::F1).clone();
        let pos = rep.inject_fault(Gen::F1).unwrap();
        assert_eq!(
            rep.gen(Gen::F1).get(pos.0, pos.1),
            before.get(pos.0, pos.1).shift_q(1)
        );
    }
}
