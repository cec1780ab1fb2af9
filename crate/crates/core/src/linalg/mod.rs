//! Sparse exact linear algebra over Q(q).

mod elim;
mod matrix;

use thiserror::Error;

pub use elim::{
    gram, kernel_basis, rank, rank_exact, rank_with_route, sample_points, solve_in_span, RankRoute,
};
pub use matrix::{QMatrix, QVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("target is not in the span of the basis")]
    NotInSpan,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
}
