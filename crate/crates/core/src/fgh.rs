//! Fourier Grid Hamiltonian on a periodic grid.

use std::f64::consts::PI;

use faer::{c64, Mat, Side};

use crate::eigensolve::EigDiagnostics;
use crate::error::{Error, Result};
use crate::lattice::GridSpec;
use crate::linalg::{fix_signs, RMat};
use crate::potential::PotentialModel;
use crate::spectrum::{MethodTag, SpectrumResult};

/// `T_ij` as a function of the offset `d = j - i`, for `d = 0..N`.
///
/// Even `N` uses the closed form with the Nyquist term split symmetrically;
/// odd `N` uses the closed form of the symmetric momentum ladder
/// `k = 2πj/L, |j| ≤ (N-1)/2`. Both are circulant.
fn kinetic_row(n: usize, k_max: f64, prefactor: f64) -> Vec<f64> {
    let nf = n as f64;
    let k2 = k_max * k_max;
    let mut row = Vec::with_capacity(n);
    if n.is_multiple_of(2) {
        row.push(prefactor * k2 / 3.0 * (1.0 + 2.0 / (nf * nf)));
        for d in 1..n {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            let s = (PI * d as f64 / nf).sin();
            row.push(prefactor * 2.0 * k2 / (nf * nf) * sign / (s * s));
        }
    } else {
        row.push(prefactor * k2 / 3.0 * (1.0 - 1.0 / (nf * nf)));
        for d in 1..n {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            let angle = PI * d as f64 / nf;
            let s = angle.sin();
            row.push(prefactor * 2.0 * k2 / (nf * nf) * sign * angle.cos() / (s * s));
        }
    }
    row
}

/// Kinetic energy matrix `T` of the grid for a particle of mass `mass`.
pub fn kinetic_matrix(grid: &GridSpec, mass: f64) -> Result<RMat> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::invalid(
            "mass",
            format!("must be positive, got {mass}"),
        ));
    }
    let n = grid.n_points();
    let prefactor = grid.hbar() * grid.hbar() / (2.0 * mass);
    let row = kinetic_row(n, grid.k_max(), prefactor);
    let mut t = Mat::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            t[(i, j)] = row[j - i];
            t[(j, i)] = row[j - i];
        }
    }
    Ok(t)
}

/// Exact kinetic eigenvalues `ħ²k²/2M` of the grid's momentum ladder, ascending.
pub fn kinetic_spectrum(grid: &GridSpec, mass: f64) -> Vec<f64> {
    let n = grid.n_points() as i64;
    let (lo, hi) = if n % 2 == 0 {
        (-n / 2 + 1, n / 2)
    } else {
        (-(n - 1) / 2, (n - 1) / 2)
    };
    let dk = 2.0 * PI / grid.length();
    let mut values: Vec<f64> = (lo..=hi)
        .map(|j| {
            let k = j as f64 * dk;
            grid.hbar() * grid.hbar() * k * k / (2.0 * mass)
        })
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

#[derive(Debug, Clone)]
pub struct GridHamiltonian {
    grid: GridSpec,
    matrix: RMat,
    potential_diag: Vec<f64>,
}

impl GridHamiltonian {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn potential_diag(&self) -> &[f64] {
        &self.potential_diag
    }

    pub fn dim(&self) -> usize {
        self.potential_diag.len()
    }

    /// `H - diag(V)`.
    pub fn kinetic(&self) -> RMat {
        let mut t = self.matrix.clone();
        for (i, v) in self.potential_diag.iter().enumerate() {
            t[(i, i)] -= v;
        }
        t
    }

    pub fn to_complex(&self) -> Mat<c64> {
        crate::linalg::to_complex(self.matrix.as_ref())
    }
}

/// `H = T + diag(V(x_i))` with the mass taken from the model.
pub fn fgh_hamiltonian(grid: &GridSpec, model: &PotentialModel) -> Result<GridHamiltonian> {
    let mut matrix = kinetic_matrix(grid, model.mass())?;
    let mut potential_diag = Vec::with_capacity(grid.n_points());
    for i in 0..grid.n_points() {
        let x = grid.point(i);
        let v = match model.eval(x) {
            Ok(v) if v.is_finite() => v,
            _ => return Err(Error::SingularGridPoint { index: i, x }),
        };
        matrix[(i, i)] += v;
        potential_diag.push(v);
    }
    Ok(GridHamiltonian {
        grid: *grid,
        matrix,
        potential_diag,
    })
}

/// Lowest `n_wanted` eigenpairs of the grid Hamiltonian.
pub fn solve_fgh(h: &GridHamiltonian, n_wanted: usize) -> Result<SpectrumResult> {
    let n = h.dim();
    if n_wanted == 0 || n_wanted > n {
        return Err(Error::invalid(
            "n_wanted",
            format!("must lie in 1..={n}, got {n_wanted}"),
        ));
    }
    let evd = h.matrix.self_adjoint_eigen(Side::Lower).map_err(|e| {
        Error::NumericalFailure(format!("symmetric eigensolver on {n}x{n} FGH: {e:?}"))
    })?;
    let eigenvalues: Vec<f64> = (0..n_wanted).map(|i| evd.S()[i]).collect();
    if eigenvalues.iter().any(|e| !e.is_finite()) {
        return Err(Error::NumericalFailure(
            "FGH eigensolver returned non-finite eigenvalues".into(),
        ));
    }
    let mut vectors: RMat = evd.U().subcols(0, n_wanted).to_owned();
    fix_signs(&mut vectors);

    let hv = &h.matrix * &vectors;
    let mut residual_max = 0.0f64;
    for (j, &lambda) in eigenvalues.iter().enumerate() {
        let mut r2 = 0.0;
        let mut v2 = 0.0;
        for i in 0..n {
            r2 += (hv[(i, j)] - lambda * vectors[(i, j)]).powi(2);
            v2 += vectors[(i, j)].powi(2);
        }
        residual_max = residual_max.max((r2 / v2).sqrt());
    }

    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors: crate::linalg::to_complex(vectors.as_ref()),
        basis_size: n,
        residual_max,
        overlap_condition: 1.0,
        method: MethodTag::Fgh,
        diagnostics: EigDiagnostics::default(),
    })
}
