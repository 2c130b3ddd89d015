//! Periodic (pvN) and bi-orthogonal (bvN) von Neumann bases in sampled form.
//!
//! All inner products are plain sums over grid samples, without a `dx`
//! weight. The missing weight rescales `H` and `s` by the same factor and
//! drops out of the generalized eigenproblem.

mod analytic;
mod hamiltonian;
mod prune;
mod sampling;
mod solve;

pub use analytic::{analytic_vn_matrices, analytic_vn_solve};
pub use hamiltonian::{bvn_hamiltonian, bvn_hamiltonian_restricted, pvn_hamiltonian, restrict};
pub use prune::{center_energies, prune_mask, prune_mask_with_margin, PruneMask};
pub use sampling::{
    cholesky_condition_bound, dual_samples, dual_samples_with_limit, gaussian_samples,
    lattice_overlap, overlap_matrix, BasisMatrices, DEFAULT_MAX_CONDITION,
};
pub use solve::{solve_method, VnProblem};
