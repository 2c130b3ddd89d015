use std::path::PathBuf;
use std::time::Instant;

use pvn_core::fgh::{fgh_hamiltonian, solve_fgh};
use pvn_core::vn_basis::{prune_mask_with_margin, solve_method, PruneMask, VnProblem};
use pvn_core::{MethodTag, PotentialModel, SpectrumResult};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::ecut::{resolve_cut, EcutSelection};
use crate::error::{BenchError, Result};
use crate::report::{
    compare_levels, finite, max_abs_error, output_path, write_csv, write_json, write_level_table,
    ResultDocument, Tolerance,
};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Where result and table files go; nothing is written when `None`.
    pub out_dir: Option<PathBuf>,
    /// Overrides `report.tolerance_digits`.
    pub tolerance_digits: Option<u32>,
}

/// The bvN mask a config asks for, with the search record when it came
/// from `target_count`.
pub fn resolve_mask(config: &ExperimentConfig) -> Result<ResolvedMask> {
    let lattice = config.lattice_spec()?;
    let (e_cut, selection) = resolve_cut(config)?;
    let margin = config.prune.as_ref().map_or(0.0, |p| p.margin);
    let mask = match e_cut {
        None => PruneMask::full(&lattice),
        Some(e) => prune_mask_with_margin(&lattice, &config.potential, e, margin)?,
    };
    Ok((mask, selection))
}

fn fgh_levels_wanted(config: &ExperimentConfig, n: usize) -> usize {
    let levels = config.n_levels();
    let wanted = match config.potential {
        // nearest-match pairing needs the partners around every Bohr level
        PotentialModel::Coulomb { .. } => 4 * levels + 8,
        _ => levels,
    };
    wanted.clamp(1, n)
}

/// The bvN mask of a solve and, for `target_count`, its search record.
pub type ResolvedMask = (PruneMask, Option<EcutSelection>);

/// Solves the configured problem. Returns the spectrum and, for bvN, the mask.
pub fn solve_config(config: &ExperimentConfig) -> Result<(SpectrumResult, Option<ResolvedMask>)> {
    let grid = config.grid_spec()?;
    Ok(match config.method {
        MethodTag::Fgh => {
            let h = fgh_hamiltonian(&grid, &config.potential)?;
            (
                solve_fgh(&h, fgh_levels_wanted(config, grid.n_points()))?,
                None,
            )
        }
        MethodTag::Pvn | MethodTag::VnAnalytic => (
            solve_method(
                &config.lattice_spec()?,
                &config.potential,
                config.method,
                None,
            )?,
            None,
        ),
        MethodTag::Bvn => {
            let (mask, selection) = resolve_mask(config)?;
            let problem = VnProblem::new(&config.lattice_spec()?, &config.potential)?;
            (problem.solve_bvn(&mask)?, Some((mask, selection)))
        }
    })
}

/// Runs one experiment and, with `out_dir`, writes the result document and
/// the per-level table. A failed accuracy gate is reported in the document;
/// see [`ResultDocument::gate_result`].
pub fn run_experiment(config: &ExperimentConfig, options: &RunOptions) -> Result<ResultDocument> {
    let start = Instant::now();
    let (spectrum, mask) = solve_config(config)?;
    let elapsed_seconds = start.elapsed().as_secs_f64();

    let mut warnings = Vec::new();
    if let PotentialModel::Coulomb { .. } = config.potential {
        warnings.push(
            "Coulomb potential evaluated as -Q²/(|x|+ε); levels paired to the Bohr series by nearest match"
                .to_string(),
        );
    }
    if let Some(lattice) = config
        .lattice
        .as_ref()
        .filter(|_| config.method != MethodTag::Fgh)
    {
        let spec = lattice.spec(config.grid_spec()?)?;
        if (spec.alpha() - spec.default_alpha()).abs() > 1e-12 * spec.default_alpha() {
            warnings.push(format!(
                "alpha = {} differs from the default dp/(2a) = {:.6}",
                spec.alpha(),
                spec.default_alpha()
            ));
        }
    }
    if spectrum.diagnostics.fallback_used {
        warnings.push(format!(
            "overlap factorization failed; spectral fallback discarded {} modes",
            spectrum.diagnostics.discarded_modes
        ));
    }
    let (e_cut, target_count, achieved_count) = match &mask {
        None => (None, None, None),
        Some((mask, selection)) => {
            if let Some(w) = selection.as_ref().and_then(|s| s.warning.clone()) {
                warnings.push(w);
            }
            (
                finite(mask.e_cut()),
                selection.as_ref().map(|s| s.target_count),
                Some(mask.len()),
            )
        }
    };

    let tolerance_kind = config.report.tolerance;
    let levels = if config.report.oracle {
        compare_levels(
            &config.potential,
            config.grid.hbar,
            &spectrum.eigenvalues,
            config.n_levels(),
            tolerance_kind,
        )?
        .unwrap_or_default()
    } else {
        Vec::new()
    };
    if config.report.oracle && levels.is_empty() {
        warnings.push(format!(
            "no analytic spectrum for the {} potential",
            config.potential.kind()
        ));
    }
    let tolerance = options
        .tolerance_digits
        .or(config.report.tolerance_digits)
        .filter(|_| !levels.is_empty())
        .map(|d| Tolerance::new(d, tolerance_kind));
    let gate_passed = tolerance.map(|t| levels.iter().all(|r| t.accepts(r)));

    let doc = ResultDocument {
        label: config.report.label.clone(),
        method: config.method,
        potential: config.potential.kind().to_string(),
        grid_points: config.grid.n_points,
        basis_size: spectrum.basis_size,
        residual_max: finite(spectrum.residual_max),
        overlap_condition: finite(spectrum.overlap_condition),
        fallback_used: spectrum.diagnostics.fallback_used,
        e_cut,
        target_count,
        achieved_count,
        eigenvalues: spectrum.eigenvalues.clone(),
        max_abs_error: max_abs_error(&levels),
        levels,
        tolerance_kind,
        tolerance,
        gate_passed,
        elapsed_seconds,
        assumptions: config.report.assumptions.clone(),
        warnings,
        config: config.clone(),
    };

    if let Some(dir) = &options.out_dir {
        write_json(&output_path(dir, &config.report.result_file)?, &doc)?;
        write_level_table(&output_path(dir, &config.report.table_file)?, &doc)?;
    }
    Ok(doc)
}

/// One lattice cell of a phase-space mask picture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskRow {
    pub cell_index: usize,
    pub x_center: f64,
    pub p_center: f64,
    pub kept: u8,
}

/// Every lattice cell with its center and whether the config's bvN mask keeps it.
pub fn emit_phase_mask(config: &ExperimentConfig) -> Result<(Vec<MaskRow>, Option<EcutSelection>)> {
    if config.method != MethodTag::Bvn {
        return Err(BenchError::config(
            "solver.method",
            format!("phase-mask needs method bvn, not {}", config.method),
        ));
    }
    let (mask, selection) = resolve_mask(config)?;
    let rows = mask
        .lattice()
        .cell_centers()
        .into_iter()
        .enumerate()
        .map(|(cell_index, c)| MaskRow {
            cell_index,
            x_center: c.x,
            p_center: c.p,
            kept: mask.contains(cell_index) as u8,
        })
        .collect();
    Ok((rows, selection))
}

pub fn write_phase_mask(
    config: &ExperimentConfig,
    out_dir: &std::path::Path,
) -> Result<(PathBuf, Vec<MaskRow>)> {
    let (rows, _) = emit_phase_mask(config)?;
    let path = output_path(out_dir, "phase-mask.csv")?;
    write_csv(&path, &rows)?;
    Ok((path, rows))
}
