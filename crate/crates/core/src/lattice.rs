//! Periodic coordinate grid and von Neumann phase-space lattice.
//!
//! A grid of `N` points with spacing `dx = L / N` and a lattice of
//! `n_x * n_p = N` cells of area `h = 2πħ` cover the same phase-space
//! rectangle `[x_min, x_min + L) x [-P, P)` with `P = πħ / dx`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `N`-point periodic grid `x_i = x_min + i * dx`, `i = 0..N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n_points: usize,
    x_min: f64,
    length: f64,
    hbar: f64,
}

impl GridSpec {
    pub fn new(x_min: f64, length: f64, n_points: usize, hbar: f64) -> Result<Self> {
        if !x_min.is_finite() {
            return Err(Error::invalid(
                "x_min",
                format!("must be finite, got {x_min}"),
            ));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid(
                "length",
                format!("must be positive, got {length}"),
            ));
        }
        if n_points < 2 {
            return Err(Error::invalid(
                "n_points",
                format!("must be at least 2, got {n_points}"),
            ));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::invalid(
                "hbar",
                format!("must be positive, got {hbar}"),
            ));
        }
        Ok(Self {
            n_points,
            x_min,
            length,
            hbar,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n_points as f64
    }

    /// Momentum boundary `P = πħ / dx`.
    pub fn p_max(&self) -> f64 {
        PI * self.hbar / self.dx()
    }

    /// Wavenumber boundary `K = P / ħ = π / dx`.
    pub fn k_max(&self) -> f64 {
        PI / self.dx()
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Area `2 L P` of the phase-space rectangle; equals `N h`.
    pub fn phase_space_area(&self) -> f64 {
        2.0 * self.length * self.p_max()
    }
}

/// Builds a grid; see [`GridSpec::new`].
pub fn make_grid(x_min: f64, length: f64, n_points: usize, hbar: f64) -> Result<GridSpec> {
    GridSpec::new(x_min, length, n_points, hbar)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }
}

/// `n_x * n_p` lattice of Gaussian cells of width `a` in x and `dp = h / a` in p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VnLatticeSpec {
    grid: GridSpec,
    n_x: usize,
    n_p: usize,
    alpha: f64,
}

impl VnLatticeSpec {
    pub fn new(grid: GridSpec, n_x: usize, n_p: usize, alpha: Option<f64>) -> Result<Self> {
        if n_x == 0 {
            return Err(Error::invalid("n_x", "must be positive"));
        }
        if n_p == 0 {
            return Err(Error::invalid("n_p", "must be positive"));
        }
        if n_x.checked_mul(n_p) != Some(grid.n_points()) {
            return Err(Error::LatticeMismatch {
                lattice_cells: n_x.saturating_mul(n_p),
                grid_points: grid.n_points(),
            });
        }
        let a = grid.length() / n_x as f64;
        let dp = 2.0 * PI * grid.hbar() / a;
        let alpha = match alpha {
            Some(alpha) if alpha > 0.0 && alpha.is_finite() => alpha,
            Some(alpha) => {
                return Err(Error::invalid(
                    "alpha",
                    format!("must be positive, got {alpha}"),
                ))
            }
            None => dp / (2.0 * a),
        };
        Ok(Self {
            grid,
            n_x,
            n_p,
            alpha,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_p(&self) -> usize {
        self.n_p
    }

    pub fn n_cells(&self) -> usize {
        self.n_x * self.n_p
    }

    /// Cell width in position.
    pub fn a(&self) -> f64 {
        self.grid.length() / self.n_x as f64
    }

    /// Cell width in momentum, `2πħ / a`.
    pub fn dp(&self) -> f64 {
        2.0 * PI * self.grid.hbar() / self.a()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `α = dp / (2a)`, the width that balances the Gaussian to its cell.
    pub fn default_alpha(&self) -> f64 {
        self.dp() / (2.0 * self.a())
    }

    /// Splits a flat cell index into `(position slot, momentum slot)`.
    /// Position is the fast index.
    pub fn slots(&self, cell_index: usize) -> Result<(usize, usize)> {
        if cell_index >= self.n_cells() {
            return Err(Error::IndexOutOfRange {
                index: cell_index,
                size: self.n_cells(),
            });
        }
        Ok((cell_index % self.n_x, cell_index / self.n_x))
    }

    pub fn cell_center(&self, cell_index: usize) -> Result<PhasePoint> {
        let (i, j) = self.slots(cell_index)?;
        let x = self.grid.x_min() + (i as f64 + 0.5) * self.a();
        // Written relative to the lattice midpoint so that mirror cells j and
        // n_p - 1 - j get momenta that are exact negatives of each other.
        let p = (j as f64 + 0.5 - 0.5 * self.n_p as f64) * self.dp();
        Ok(PhasePoint { x, p })
    }

    pub fn cell_centers(&self) -> Vec<PhasePoint> {
        (0..self.n_cells())
            .map(|m| self.cell_center(m).expect("index in range"))
            .collect()
    }
}

/// Builds a lattice; `alpha = None` selects `dp / (2a)`.
pub fn make_lattice(
    grid: GridSpec,
    n_x: usize,
    n_p: usize,
    alpha: Option<f64>,
) -> Result<VnLatticeSpec> {
    VnLatticeSpec::new(grid, n_x, n_p, alpha)
}

pub fn cell_center(lattice: &VnLatticeSpec, cell_index: usize) -> Result<PhasePoint> {
    lattice.cell_center(cell_index)
}
