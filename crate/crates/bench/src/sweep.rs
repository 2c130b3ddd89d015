use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use pvn_core::vn_basis::{prune_mask, VnProblem};
use pvn_core::PotentialModel;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, PruneSelection};
use crate::ecut::achievable_counts;
use crate::error::{BenchError, Result};
use crate::report::{compare_levels, max_abs_error, output_path, write_csv, write_json, Tolerance};

/// Digits required by the sweep gate unless configured otherwise.
pub const DEFAULT_SWEEP_DIGITS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyPoint {
    pub hbar: f64,
    pub basis_size: usize,
    pub states_below_cut: usize,
    /// `basis_size / states_below_cut`.
    pub eta: f64,
}

impl EfficiencyPoint {
    pub fn new(hbar: f64, basis_size: usize, states_below_cut: usize) -> Self {
        Self {
            hbar,
            basis_size,
            states_below_cut,
            eta: basis_size as f64 / states_below_cut as f64,
        }
    }
}

/// The classically allowed region `p²/2m + V(x) <= E` around the well and its
/// enclosing rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellGeometry {
    pub energy: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub p_max: f64,
    pub rectangle_area: f64,
    pub shell_area: f64,
    /// `rectangle_area / shell_area`: the η of a grid that just covers the rectangle.
    pub area_ratio: f64,
}

fn potential(model: &PotentialModel, x: f64) -> Result<f64> {
    Ok(model.eval(x)?)
}

/// Turning points, rectangle and enclosed area of the energy shell `E`,
/// searched for inside `[lo, hi]`.
pub fn shell_geometry(
    model: &PotentialModel,
    energy: f64,
    lo: f64,
    hi: f64,
) -> Result<ShellGeometry> {
    const SCAN: usize = 20_000;
    let xs: Vec<f64> = (0..=SCAN)
        .map(|k| lo + (hi - lo) * k as f64 / SCAN as f64)
        .collect();
    let vs = xs
        .iter()
        .map(|&x| potential(model, x))
        .collect::<Result<Vec<f64>>>()?;
    let (bottom, v_min) = vs
        .iter()
        .cloned()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("scan is non-empty");
    if !(v_min < energy) {
        return Err(BenchError::config(
            "sweep.e_shell",
            format!("{energy} lies below the potential minimum {v_min}"),
        ));
    }
    let mut left = bottom;
    while left > 0 && vs[left - 1] <= energy {
        left -= 1;
    }
    let mut right = bottom;
    while right < SCAN && vs[right + 1] <= energy {
        right += 1;
    }
    if left == 0 || right == SCAN {
        return Err(BenchError::config(
            "sweep.e_shell",
            "the shell is not closed inside the grid box",
        ));
    }
    let refine = |mut inside: f64, mut outside: f64| -> Result<f64> {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if potential(model, mid)? <= energy {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(0.5 * (inside + outside))
    };
    let x_min = refine(xs[left], xs[left - 1])?;
    let x_max = refine(xs[right], xs[right + 1])?;
    // golden-section polish of the scanned minimum
    let (mut a, mut b) = (xs[bottom.saturating_sub(1)], xs[(bottom + 1).min(SCAN)]);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let (c1, c2) = (b - g * (b - a), a + g * (b - a));
        if potential(model, c1)? <= potential(model, c2)? {
            b = c2;
        } else {
            a = c1;
        }
    }
    let v_min = potential(model, 0.5 * (a + b))?.min(v_min);
    let mass = model.mass();
    let p_max = (2.0 * mass * (energy - v_min)).sqrt();

    // ∮ p dx = 2 ∫ sqrt(2m(E - V)) dx with x = c - r cos θ, which smooths the
    // square-root behavior at both turning points.
    const QUAD: usize = 8_192;
    let (c, r) = (0.5 * (x_min + x_max), 0.5 * (x_max - x_min));
    let mut integral = 0.0;
    for k in 1..QUAD {
        let theta = PI * k as f64 / QUAD as f64;
        let x = c - r * theta.cos();
        let kinetic = (energy - potential(model, x)?).max(0.0);
        integral += (2.0 * mass * kinetic).sqrt() * r * theta.sin();
    }
    let shell_area = 2.0 * integral * PI / QUAD as f64;
    let rectangle_area = (x_max - x_min) * 2.0 * p_max;
    Ok(ShellGeometry {
        energy,
        x_min,
        x_max,
        p_max,
        rectangle_area,
        shell_area,
        area_ratio: rectangle_area / shell_area,
    })
}

/// Grid reference: the number of Planck cells `h = 2πħ` that tile the shell's
/// rectangle, per state below the shell.
pub fn rectangle_point(
    shell: &ShellGeometry,
    hbar: f64,
    states_below_cut: usize,
) -> EfficiencyPoint {
    let cells = (shell.rectangle_area / (2.0 * PI * hbar)).ceil() as usize;
    EfficiencyPoint::new(hbar, cells, states_below_cut)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub hbar: f64,
    pub grid_points: usize,
    pub alpha: f64,
    pub states_below_cut: usize,
    /// `None` when no mask met the gate.
    pub bvn: Option<EfficiencyPoint>,
    pub e_cut: Option<f64>,
    pub max_abs_error: Option<f64>,
    pub rectangle: EfficiencyPoint,
    pub masks_tried: usize,
    pub failure: Option<String>,
    pub elapsed_seconds: f64,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub label: String,
    pub e_shell: f64,
    pub tolerance: Tolerance,
    pub shell: ShellGeometry,
    pub points: Vec<SweepPoint>,
    pub assumptions: Vec<String>,
}

impl SweepReport {
    pub fn bvn_points(&self) -> Vec<EfficiencyPoint> {
        self.points.iter().filter_map(|p| p.bvn.clone()).collect()
    }

    pub fn rectangle_points(&self) -> Vec<EfficiencyPoint> {
        self.points.iter().map(|p| p.rectangle.clone()).collect()
    }

    pub fn failures(&self) -> Vec<(f64, String)> {
        self.points
            .iter()
            .filter_map(|p| p.failure.clone().map(|f| (p.hbar, f)))
            .collect()
    }
}

/// Max error of the lowest `states` bvN levels for the mask at `e_cut`, or
/// `None` when the basis holds fewer levels.
fn mask_error(
    problem: &VnProblem,
    config: &ExperimentConfig,
    e_cut: f64,
    states: usize,
) -> Result<Option<f64>> {
    let mask = prune_mask(problem.lattice(), &config.potential, e_cut)?;
    if mask.len() < states {
        return Ok(None);
    }
    let spectrum = problem.solve_bvn(&mask)?;
    let rows = compare_levels(
        &config.potential,
        config.grid.hbar,
        &spectrum.eigenvalues,
        states,
        config.report.tolerance,
    );
    Ok(match rows {
        Ok(Some(rows)) => max_abs_error(&rows),
        _ => None,
    })
}

fn run_point(
    base: &ExperimentConfig,
    index: usize,
    e_shell: f64,
    shell: &ShellGeometry,
    tolerance: Tolerance,
) -> Result<SweepPoint> {
    let start = Instant::now();
    let config = base.sweep_point(index)?;
    let hbar = config.grid.hbar;
    let lattice = config.lattice_spec()?;
    let states = config.potential.count_states_below(hbar, e_shell)?;
    let mut point = SweepPoint {
        hbar,
        grid_points: config.grid.n_points,
        alpha: lattice.alpha(),
        states_below_cut: states,
        bvn: None,
        e_cut: None,
        max_abs_error: None,
        rectangle: rectangle_point(shell, hbar, states.max(1)),
        masks_tried: 0,
        failure: None,
        elapsed_seconds: 0.0,
        config: config.clone(),
    };
    if states == 0 {
        point.failure = Some("no analytic level below the shell".into());
        return Ok(point);
    }
    let problem = VnProblem::new(&lattice, &config.potential)?;
    let steps: Vec<(usize, f64)> = achievable_counts(&lattice, &config.potential)?
        .into_iter()
        .filter(|&(count, _)| count >= states)
        .collect();
    let passes = |error: Option<f64>| error.is_some_and(|e| e <= tolerance.value);

    // Smallest passing mask by bisection over the achievable sizes. The
    // largest mask is checked first so an unreachable gate is reported.
    let mut tried = 0;
    let last = steps.len() - 1;
    let full_error = mask_error(&problem, &config, steps[last].1, states)?;
    tried += 1;
    if !passes(full_error) {
        point.masks_tried = tried;
        point.max_abs_error = full_error;
        point.failure = Some(format!(
            "gate {:e} unreachable: {} cells give max error {}",
            tolerance.value,
            steps[last].0,
            full_error.map_or("n/a".into(), |e| format!("{e:.3e}"))
        ));
        point.elapsed_seconds = start.elapsed().as_secs_f64();
        return Ok(point);
    }
    let (mut lo, mut hi, mut best_error) = (0usize, last, full_error);
    while lo < hi {
        let mid = (lo + hi) / 2;
        let error = mask_error(&problem, &config, steps[mid].1, states)?;
        tried += 1;
        if passes(error) {
            hi = mid;
            best_error = error;
        } else {
            lo = mid + 1;
        }
    }
    let (count, e_cut) = steps[hi];
    point.bvn = Some(EfficiencyPoint::new(hbar, count, states));
    point.e_cut = Some(e_cut);
    if let Some(prune) = point.config.prune.as_mut() {
        prune.selection = PruneSelection::EnergyCut(e_cut);
    }
    point.max_abs_error = best_error;
    point.masks_tried = tried;
    point.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(point)
}

/// Runs every point of the config's `[sweep]` block. A point whose gate
/// cannot be met, or whose solve fails, is recorded and the sweep goes on.
pub fn sweep_hbar(base: &ExperimentConfig, tolerance_digits: Option<u32>) -> Result<SweepReport> {
    let sweep = base
        .sweep
        .as_ref()
        .ok_or_else(|| BenchError::config("sweep", "missing [sweep] section"))?;
    let digits = tolerance_digits
        .or(base.report.tolerance_digits)
        .unwrap_or(DEFAULT_SWEEP_DIGITS);
    let tolerance = Tolerance::new(digits, base.report.tolerance);
    let shell = shell_geometry(
        &base.potential,
        sweep.e_shell,
        base.grid.x_min,
        base.grid.x_min + base.grid.length,
    )?;
    let mut points = Vec::with_capacity(sweep.hbar_values.len());
    for index in 0..sweep.hbar_values.len() {
        let point = match run_point(base, index, sweep.e_shell, &shell, tolerance) {
            Ok(point) => point,
            Err(BenchError::Numerical(e)) => {
                let config = base.sweep_point(index)?;
                let hbar = config.grid.hbar;
                let states = config.potential.count_states_below(hbar, sweep.e_shell)?;
                SweepPoint {
                    hbar,
                    grid_points: config.grid.n_points,
                    alpha: config.lattice_spec()?.alpha(),
                    states_below_cut: states,
                    bvn: None,
                    e_cut: None,
                    max_abs_error: None,
                    rectangle: rectangle_point(&shell, hbar, states.max(1)),
                    masks_tried: 0,
                    failure: Some(format!("numerical failure: {e}")),
                    elapsed_seconds: 0.0,
                    config,
                }
            }
            Err(other) => return Err(other),
        };
        points.push(point);
    }
    Ok(SweepReport {
        label: base.report.label.clone(),
        e_shell: sweep.e_shell,
        tolerance,
        shell,
        points,
        assumptions: base.report.assumptions.clone(),
    })
}

#[derive(Serialize)]
struct EtaRow {
    hbar: f64,
    eta: f64,
}

/// Writes `sweep-bvn.csv`, `sweep-fgh.csv` (both `hbar,eta`) and `sweep.json`.
pub fn write_sweep(report: &SweepReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let rows = |points: Vec<EfficiencyPoint>| -> Vec<EtaRow> {
        points
            .into_iter()
            .map(|p| EtaRow {
                hbar: p.hbar,
                eta: p.eta,
            })
            .collect()
    };
    let bvn = output_path(out_dir, "sweep-bvn.csv")?;
    write_csv(&bvn, &rows(report.bvn_points()))?;
    let fgh = output_path(out_dir, "sweep-fgh.csv")?;
    write_csv(&fgh, &rows(report.rectangle_points()))?;
    let json = output_path(out_dir, "sweep.json")?;
    write_json(&json, report)?;
    Ok(vec![bvn, fgh, json])
}
