//! Exact representation theory of U_q(su(3)) and its branching to a
//! two-parameter coideal subalgebra.

pub mod branching;
pub mod cli;
pub mod coideal;
pub mod exactq;
pub mod linalg;
pub mod report;
pub mod uqsl3rep;
