use pvn_core::vn_basis::{center_energies, prune_mask};
use pvn_core::{PotentialModel, VnLatticeSpec};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, PruneSelection};
use crate::error::{BenchError, Result};

/// Outcome of an energy-cut search for a requested mask size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcutSelection {
    pub target_count: usize,
    pub e_cut: f64,
    pub achieved_count: usize,
    /// Achievable sizes just below and above the target (absent at the ends).
    pub lower_neighbor: Option<usize>,
    pub upper_neighbor: Option<usize>,
    pub warning: Option<String>,
}

impl EcutSelection {
    pub fn is_exact(&self) -> bool {
        self.achieved_count == self.target_count
    }
}

/// Every achievable mask size with the smallest cut producing it, ascending.
///
/// The kept-cell count only changes at cell-center energies, so these pairs
/// are the complete step function `e_cut -> |mask|`.
pub fn achievable_counts(
    lattice: &VnLatticeSpec,
    model: &PotentialModel,
) -> Result<Vec<(usize, f64)>> {
    let mut energies = center_energies(lattice, model)?;
    energies.sort_by(f64::total_cmp);
    let mut steps = Vec::new();
    for (i, &e) in energies.iter().enumerate() {
        if energies.get(i + 1).is_none_or(|&next| next > e) {
            steps.push((i + 1, e));
        }
    }
    Ok(steps)
}

/// Smallest `e_cut` keeping exactly `target` cells, or the nearest achievable
/// count (ties go to the larger mask) with a warning naming the neighbors.
pub fn find_ecut_for(
    lattice: &VnLatticeSpec,
    model: &PotentialModel,
    target: usize,
) -> Result<EcutSelection> {
    let n = lattice.n_cells();
    if target == 0 || target > n {
        return Err(BenchError::config(
            "target_count",
            format!("must lie in 1..={n}, got {target}"),
        ));
    }
    let steps = achievable_counts(lattice, model)?;
    let above = steps.partition_point(|&(count, _)| count < target);
    let (chosen, lower, upper) = if above < steps.len() && steps[above].0 == target {
        let lower = above.checked_sub(1).map(|i| steps[i].0);
        let upper = steps.get(above + 1).map(|s| s.0);
        (above, lower, upper)
    } else {
        let lower = above.checked_sub(1).map(|i| steps[i].0);
        let upper = steps.get(above).map(|s| s.0);
        let pick = match (lower, upper) {
            (Some(lo), Some(hi)) if target - lo < hi - target => above - 1,
            (Some(_), None) => above - 1,
            _ => above,
        };
        (pick, lower, upper)
    };
    let (achieved_count, e_cut) = steps[chosen];
    let warning = (achieved_count != target).then(|| {
        format!(
            "no cut keeps exactly {target} cells; achievable neighbors are {} and {}, using {achieved_count}",
            lower.map_or("none".into(), |c| c.to_string()),
            upper.map_or("none".into(), |c| c.to_string()),
        )
    });
    let selection = EcutSelection {
        target_count: target,
        e_cut,
        achieved_count,
        lower_neighbor: lower,
        upper_neighbor: upper,
        warning,
    };
    debug_assert_eq!(
        prune_mask(lattice, model, e_cut).map(|m| m.len()).ok(),
        Some(achieved_count)
    );
    Ok(selection)
}

/// [`find_ecut_for`] on the lattice and potential of a config.
pub fn find_ecut(config: &ExperimentConfig, target: usize) -> Result<EcutSelection> {
    find_ecut_for(&config.lattice_spec()?, &config.potential, target)
}

/// Cut used by a config's `[prune]` block; `None` keeps every cell.
pub fn resolve_cut(config: &ExperimentConfig) -> Result<(Option<f64>, Option<EcutSelection>)> {
    let Some(prune) = &config.prune else {
        return Ok((None, None));
    };
    Ok(match prune.selection {
        PruneSelection::All => (None, None),
        PruneSelection::EnergyCut(e) => (Some(e), None),
        PruneSelection::TargetCount(k) => {
            let selection = find_ecut(config, k)?;
            (Some(selection.e_cut), Some(selection))
        }
    })
}
