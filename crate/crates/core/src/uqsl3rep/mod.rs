//! Finite-dimensional irreducible modules of U_q(su(3)).

mod basis;
mod expr;
mod rep;
mod verify;

pub use basis::{
    enumerate_basis, norm_h, norm_h_negative_exponent, ActionCoeffs, BasisIndex, RepError, Weight,
};
pub use expr::{
    eval_expr, p_k12, p_k2, p_ki, AlgExpr, Evaluator, Sym, E1, E2, F1, F2, K1, K1INV, K2, K2INV,
};
pub use rep::{generator_matrix, Gen, RepJson, RepJsonError, RepSpace};
pub use verify::{
    basis_word, inner_product_oracle, oracle_gram, verify_defining_relations, verify_layer_actions,
    verify_lemma_relations, verify_norm_positivity, OracleError,
};
