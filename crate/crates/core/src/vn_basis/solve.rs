use faer::MatRef;

use crate::eigensolve::{generalized_hermitian_eig, GeneralizedEigResult};
use crate::error::{Error, Result};
use crate::fgh::{fgh_hamiltonian, solve_fgh, GridHamiltonian};
use crate::lattice::VnLatticeSpec;
use crate::linalg::CMat;
use crate::potential::PotentialModel;
use crate::spectrum::{MethodTag, SpectrumResult};

use super::analytic::analytic_vn_solve;
use super::hamiltonian::{bvn_hamiltonian_restricted, pvn_hamiltonian};
use super::prune::PruneMask;
use super::sampling::BasisMatrices;

fn into_spectrum(r: GeneralizedEigResult, method: MethodTag) -> SpectrumResult {
    SpectrumResult {
        basis_size: r.eigenvectors.nrows(),
        eigenvalues: r.eigenvalues,
        eigenvectors: r.eigenvectors,
        residual_max: r.residual_max,
        overlap_condition: r.s_condition,
        method,
        diagnostics: r.diagnostics,
    }
}

/// Grid Hamiltonian and lattice matrices of one problem, reusable across
/// many pruned solves.
#[derive(Debug, Clone)]
pub struct VnProblem {
    hamiltonian: GridHamiltonian,
    basis: BasisMatrices,
}

impl VnProblem {
    pub fn new(lattice: &VnLatticeSpec, model: &PotentialModel) -> Result<Self> {
        let hamiltonian = fgh_hamiltonian(lattice.grid(), model)?;
        let basis = BasisMatrices::build(lattice)?;
        Ok(Self { hamiltonian, basis })
    }

    pub fn hamiltonian(&self) -> &GridHamiltonian {
        &self.hamiltonian
    }

    pub fn basis(&self) -> &BasisMatrices {
        &self.basis
    }

    pub fn lattice(&self) -> &VnLatticeSpec {
        self.basis.lattice()
    }

    pub fn solve_pvn(&self) -> Result<SpectrumResult> {
        let (h, s) = pvn_hamiltonian(self.basis.g().as_ref(), &self.hamiltonian)?;
        let r = generalized_hermitian_eig(h.as_ref(), s.as_ref())?;
        Ok(into_spectrum(r, MethodTag::Pvn))
    }

    pub fn solve_bvn(&self, mask: &PruneMask) -> Result<SpectrumResult> {
        if mask.lattice() != self.lattice() {
            return Err(Error::invalid("mask", "built for a different lattice"));
        }
        let (h, s) = bvn_hamiltonian_restricted(self.basis.b().as_ref(), &self.hamiltonian, mask)?;
        let r = generalized_hermitian_eig(h.as_ref(), s.as_ref())?;
        Ok(into_spectrum(r, MethodTag::Bvn))
    }

    /// `max_k |<g̃_j|ψ_k>|` for every dropped cell `j`, over the supplied
    /// grid eigenvectors `ψ_k` (columns, unit norm).
    pub fn dropped_overlaps(
        &self,
        mask: &PruneMask,
        states: MatRef<'_, faer::c64>,
    ) -> Vec<(usize, f64)> {
        let projections: CMat = self.basis.g().adjoint() * states;
        (0..self.lattice().n_cells())
            .filter(|cell| !mask.contains(*cell))
            .map(|cell| {
                let worst = (0..states.ncols())
                    .map(|k| projections[(cell, k)].norm())
                    .fold(0.0, f64::max);
                (cell, worst)
            })
            .collect()
    }
}

/// Dispatches to the grid, pvN or bvN pipeline. `mask` is only accepted
/// for bvN; bvN without a mask keeps every cell.
pub fn solve_method(
    lattice: &VnLatticeSpec,
    model: &PotentialModel,
    method: MethodTag,
    mask: Option<&PruneMask>,
) -> Result<SpectrumResult> {
    if mask.is_some() && method != MethodTag::Bvn {
        return Err(Error::invalid(
            "mask",
            format!("only valid with bvn, not {method}"),
        ));
    }
    match method {
        MethodTag::Fgh => {
            let h = fgh_hamiltonian(lattice.grid(), model)?;
            solve_fgh(&h, h.dim())
        }
        MethodTag::Pvn => VnProblem::new(lattice, model)?.solve_pvn(),
        MethodTag::Bvn => {
            let problem = VnProblem::new(lattice, model)?;
            let full;
            let mask = match mask {
                Some(mask) => mask,
                None => {
                    full = PruneMask::full(lattice);
                    &full
                }
            };
            problem.solve_bvn(mask)
        }
        MethodTag::VnAnalytic => analytic_vn_solve(lattice, model),
    }
}
