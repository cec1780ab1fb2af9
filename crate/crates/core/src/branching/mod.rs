//! Decomposition of `V_lambda` under the coideal subalgebra: kernel of `B1`
//! layer by layer, the tridiagonal action of `C1` on it, and eigenvectors
//! built from dual q-Krawtchouk polynomials.

mod decompose;
pub mod krawtchouk;
mod layer;

pub use decompose::{
    branch, degenerate_demo, forward_substitution, fundamental_eigenspaces, highest_weight_vector,
    kappa_exponent, krawtchouk_c, psi_coefficients, verify_hw, BranchJson, BranchingResult,
    Component, ComponentChecks, ComponentJson, CsvRow, FundamentalEigen, GlobalCheck, GlobalChecks,
    HWVector,
};
pub use krawtchouk::{dual_q_krawtchouk_2phi1, dual_q_krawtchouk_3phi2, dual_q_krawtchouk_r};
pub use layer::{
    c1_on_kernel, kernel_gamma, layer_sparsity, layer_subspace, tridiagonal_c1, verify_kernel,
    verify_tridiagonal, KernelBasis, LayerSubspace, TridiagonalData,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BranchError {
    #[error("layer {i} out of range (lambda1 = {lambda1})")]
    LayerOutOfRange { i: u32, lambda1: u32 },
    #[error("x = {x} out of range (lambda2 = {lambda2})")]
    XOutOfRange { x: u32, lambda2: u32 },
    #[error("vanishing divisor a(k, l, k + i) at i = {i}, k = {k}, l = {l}")]
    ZeroDivisor { i: u32, k: usize, l: usize },
    #[error("parameters excluded: c2/c1 = -q^{s} with s <= {bound}")]
    NonGeneric { s: i64, bound: i64 },
    #[error("coideal parameters must be nonzero")]
    ZeroParameter,
}
