//! Conventional (non-periodic) von Neumann basis with closed-form integrals
//! over the whole real line. Only used as a comparison baseline.

use faer::{c64, Mat};

use crate::eigensolve::generalized_hermitian_eig;
use crate::error::{Error, Result};
use crate::lattice::VnLatticeSpec;
use crate::linalg::{hermitize, CMat};
use crate::potential::PotentialModel;
use crate::spectrum::{MethodTag, SpectrumResult};

struct GaussianPair {
    /// `<g_i|g_j>`
    overlap: c64,
    /// mean of the complex Gaussian weight `g_i* g_j / <g_i|g_j>`
    mean: c64,
}

/// Overlap of `g_i` and `g_j`, both normalized on the real line.
fn pair(alpha: f64, (xi, ki): (f64, f64), (xj, kj): (f64, f64)) -> GaussianPair {
    let b = c64::new(2.0 * alpha * (xi + xj), ki - kj);
    let c = c64::new(-alpha * (xi * xi + xj * xj), -ki * xi + kj * xj);
    GaussianPair {
        overlap: (b * b / (8.0 * alpha) + c).exp(),
        mean: b / (4.0 * alpha),
    }
}

/// Closed-form `(H, S)` of the lattice Gaussians for the harmonic oscillator.
pub fn analytic_vn_matrices(
    lattice: &VnLatticeSpec,
    model: &PotentialModel,
) -> Result<(CMat, CMat)> {
    let (mass, omega) = match *model {
        PotentialModel::Harmonic { mass, omega } => (mass, omega),
        _ => {
            return Err(Error::NotImplemented(format!(
            "closed-form Gaussian integrals are only available for the harmonic potential, not {}",
            model.kind()
        )))
        }
    };
    let alpha = lattice.alpha();
    let hbar = lattice.grid().hbar();
    let variance = 1.0 / (4.0 * alpha);
    let cells: Vec<(f64, f64)> = lattice
        .cell_centers()
        .into_iter()
        .map(|c| (c.x, c.p / hbar))
        .collect();
    let n = cells.len();
    let mut h = Mat::<c64>::zeros(n, n);
    let mut s = Mat::<c64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let GaussianPair { overlap, mean } = pair(alpha, cells[i], cells[j]);
            let (xj, kj) = cells[j];
            let x2 = mean * mean + variance;
            let y = mean - xj;
            let y2 = y * y + variance;
            // <g_i| d²/dx² |g_j> / <g_i|g_j>
            let d2 = y2 * (4.0 * alpha * alpha) + c64::new(0.0, 4.0 * alpha * kj) * y
                - kj * kj
                - 2.0 * alpha;
            let kinetic = d2 * (-hbar * hbar / (2.0 * mass));
            let potential = x2 * (0.5 * mass * omega * omega);
            h[(i, j)] = overlap * (kinetic + potential);
            s[(i, j)] = overlap;
        }
    }
    Ok((hermitize(h.as_ref()), hermitize(s.as_ref())))
}

/// Generalized eigenvalues of the conventional vN basis (harmonic only).
pub fn analytic_vn_solve(
    lattice: &VnLatticeSpec,
    model: &PotentialModel,
) -> Result<SpectrumResult> {
    let (h, s) = analytic_vn_matrices(lattice, model)?;
    let r = generalized_hermitian_eig(h.as_ref(), s.as_ref())?;
    Ok(SpectrumResult {
        basis_size: h.nrows(),
        eigenvalues: r.eigenvalues,
        eigenvectors: r.eigenvectors,
        residual_max: r.residual_max,
        overlap_condition: r.s_condition,
        method: MethodTag::VnAnalytic,
        diagnostics: r.diagnostics,
    })
}
