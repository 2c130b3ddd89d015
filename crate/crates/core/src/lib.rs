//! Periodic and bi-orthogonal von Neumann basis methods for the 1-D
//! time-independent Schrödinger equation, built on the Fourier grid.
//!
//! The crate is organized bottom-up:
//!
//! * [`lattice`]: the periodic grid and the phase-space lattice of Gaussians;
//! * [`potential`]: model potentials and their analytic spectra;
//! * [`fgh`]: the Fourier Grid Hamiltonian;
//! * [`vn_basis`]: sampled Gaussians, overlaps, duals, pvN/bvN Hamiltonians
//!   and classical-region pruning;
//! * [`eigensolve`]: the generalized Hermitian-definite eigensolver.

pub mod eigensolve;
pub mod error;
pub mod fgh;
pub mod lattice;
pub mod linalg;
pub mod potential;
pub mod spectrum;
pub mod vn_basis;

pub use error::{Error, Result};
pub use lattice::{make_grid, make_lattice, GridSpec, PhasePoint, VnLatticeSpec};
pub use potential::{PotentialModel, TabulatedPotential};
pub use spectrum::{MethodTag, SpectrumResult};

pub use faer::c64;
