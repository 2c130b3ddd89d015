use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::VnLatticeSpec;
use crate::potential::PotentialModel;

/// Cells of a lattice kept in a pruned bvN basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PruneMask {
    kept: Vec<usize>,
    e_cut: f64,
    lattice: VnLatticeSpec,
}

impl PruneMask {
    /// Every cell, with `e_cut = +inf`.
    pub fn full(lattice: &VnLatticeSpec) -> Self {
        Self {
            kept: (0..lattice.n_cells()).collect(),
            e_cut: f64::INFINITY,
            lattice: *lattice,
        }
    }

    /// Mask from explicit cell indices; duplicates are removed.
    pub fn from_indices(lattice: &VnLatticeSpec, mut kept: Vec<usize>, e_cut: f64) -> Result<Self> {
        kept.sort_unstable();
        kept.dedup();
        if let Some(&last) = kept.last() {
            if last >= lattice.n_cells() {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    size: lattice.n_cells(),
                });
            }
        } else {
            return Err(Error::EmptyBasis { e_cut });
        }
        Ok(Self {
            kept,
            e_cut,
            lattice: *lattice,
        })
    }

    /// Sorted ascending.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn len(&self) -> usize {
        self.kept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    pub fn e_cut(&self) -> f64 {
        self.e_cut
    }

    pub fn lattice(&self) -> &VnLatticeSpec {
        &self.lattice
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.kept.binary_search(&cell).is_ok()
    }

    pub fn is_full(&self) -> bool {
        self.kept.len() == self.lattice.n_cells()
    }
}

/// Classical energy `p²/2m + V(x)` at every cell center, in cell order.
pub fn center_energies(lattice: &VnLatticeSpec, model: &PotentialModel) -> Result<Vec<f64>> {
    lattice
        .cell_centers()
        .into_iter()
        .map(|c| model.classical_energy(c))
        .collect()
}

/// Keeps the cells whose center lies in the classically allowed region
/// `p²/2m + V(x) <= e_cut`.
pub fn prune_mask(
    lattice: &VnLatticeSpec,
    model: &PotentialModel,
    e_cut: f64,
) -> Result<PruneMask> {
    prune_mask_with_margin(lattice, model, e_cut, 0.0)
}

/// As [`prune_mask`] with the threshold raised to `e_cut + margin`.
pub fn prune_mask_with_margin(
    lattice: &VnLatticeSpec,
    model: &PotentialModel,
    e_cut: f64,
    margin: f64,
) -> Result<PruneMask> {
    if e_cut.is_nan() {
        return Err(Error::invalid("e_cut", "must not be NaN"));
    }
    if !margin.is_finite() {
        return Err(Error::invalid("margin", "must be finite"));
    }
    let limit = e_cut + margin;
    let energies = center_energies(lattice, model)?;
    let kept: Vec<usize> = energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e <= limit)
        .map(|(m, _)| m)
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyBasis { e_cut });
    }
    Ok(PruneMask {
        kept,
        e_cut,
        lattice: *lattice,
    })
}
