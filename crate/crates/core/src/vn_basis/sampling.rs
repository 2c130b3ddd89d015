use std::f64::consts::PI;

use faer::linalg::solvers::Solve;
use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};
use crate::lattice::VnLatticeSpec;
use crate::linalg::{hermitize, CMat};

/// Condition bound above which [`dual_samples`] refuses to build duals.
pub const DEFAULT_MAX_CONDITION: f64 = 1e12;

/// `G[n][m] = g_m(x_n)`: every lattice Gaussian sampled on every grid point.
///
/// `g_m(x) = (2α/π)^{1/4} exp(-α (x - x_c)² - i p_c (x - x_c) / ħ)` with
/// `(x_c, p_c)` the center of cell `m`.
pub fn gaussian_samples(lattice: &VnLatticeSpec) -> CMat {
    let grid = lattice.grid();
    let n = grid.n_points();
    let alpha = lattice.alpha();
    let hbar = grid.hbar();
    let norm = (2.0 * alpha / PI).powf(0.25);
    let centers = lattice.cell_centers();
    let xs = grid.points();
    Mat::from_fn(n, lattice.n_cells(), |row, col| {
        let c = centers[col];
        let d = xs[row] - c.x;
        c64::from_polar(norm * (-alpha * d * d).exp(), -c.p * d / hbar)
    })
}

/// `S = G†G`, symmetrized.
pub fn overlap_matrix(g: MatRef<'_, c64>) -> Result<CMat> {
    if g.nrows() != g.ncols() {
        return Err(Error::DimensionMismatch {
            expected: "square G".into(),
            found: format!("{}x{}", g.nrows(), g.ncols()),
        });
    }
    let s = g.adjoint() * g;
    Ok(hermitize(s.as_ref()))
}

/// `S = G†G` for the lattice Gaussians without forming `G`.
///
/// For position slots `i, i'` the sum over grid points depends on the
/// momentum slots only through `j - j'`, so each slot pair costs one
/// short sweep over the grid. Same sums as [`overlap_matrix`], in a
/// different order.
pub fn lattice_overlap(lattice: &VnLatticeSpec) -> CMat {
    let grid = lattice.grid();
    let (n_x, n_p) = (lattice.n_x(), lattice.n_p());
    let n = grid.n_points();
    let alpha = lattice.alpha();
    let hbar = grid.hbar();
    let norm = (2.0 * alpha / PI).powf(0.25);
    let xs = grid.points();
    let centers = lattice.cell_centers();

    let envelopes: Vec<Vec<f64>> = (0..n_x)
        .map(|i| {
            let xc = centers[i].x;
            xs.iter()
                .map(|x| norm * (-alpha * (x - xc) * (x - xc)).exp())
                .collect()
        })
        .collect();
    // waves[q + n_p - 1][k] = exp(i q dp x_k / ħ)
    let waves: Vec<Vec<c64>> = (0..2 * n_p - 1)
        .map(|q| {
            let shift = (q as f64 - (n_p as f64 - 1.0)) * lattice.dp() / hbar;
            xs.iter().map(|x| c64::from_polar(1.0, shift * x)).collect()
        })
        .collect();
    // conj(G[k, m]) G[k, m'] carries exp(-i p_j x_i / ħ) exp(i p_j' x_i' / ħ)
    let phases: Vec<c64> = centers
        .iter()
        .map(|c| c64::from_polar(1.0, c.p * c.x / hbar))
        .collect();

    let mut s = Mat::<c64>::zeros(n, n);
    let mut weights = vec![0.0; n];
    let mut sums = vec![c64::new(0.0, 0.0); 2 * n_p - 1];
    for i in 0..n_x {
        for i2 in i..n_x {
            for k in 0..n {
                weights[k] = envelopes[i][k] * envelopes[i2][k];
            }
            let support: Vec<usize> = (0..n).filter(|&k| weights[k] != 0.0).collect();
            for (sum, wave) in sums.iter_mut().zip(&waves) {
                *sum = support.iter().map(|&k| wave[k] * weights[k]).sum();
            }
            for j in 0..n_p {
                for j2 in 0..n_p {
                    let (m, m2) = (j * n_x + i, j2 * n_x + i2);
                    let value = phases[m].conj() * phases[m2] * sums[j + n_p - 1 - j2];
                    s[(m, m2)] = value;
                    s[(m2, m)] = value.conj();
                }
            }
        }
    }
    for m in 0..n {
        s[(m, m)].im = 0.0;
    }
    s
}

/// `(max L_ii / min L_ii)²` from the Cholesky factor; a lower bound on the
/// 2-norm condition number of `s = L L†`.
pub fn cholesky_condition_bound(l: MatRef<'_, c64>) -> f64 {
    let (lo, hi) = (0..l.nrows()).fold((f64::INFINITY, 0.0f64), |(lo, hi), i| {
        let d = l[(i, i)].re.abs();
        (lo.min(d), hi.max(d))
    });
    if lo == 0.0 {
        f64::INFINITY
    } else {
        (hi / lo).powi(2)
    }
}

/// `B = G S⁻¹`, obtained by solving `S X = G†` and taking `B = X†`.
pub fn dual_samples(g: MatRef<'_, c64>, s: MatRef<'_, c64>) -> Result<CMat> {
    dual_samples_with_limit(g, s, DEFAULT_MAX_CONDITION)
}

pub fn dual_samples_with_limit(
    g: MatRef<'_, c64>,
    s: MatRef<'_, c64>,
    max_condition: f64,
) -> Result<CMat> {
    let n = g.ncols();
    if s.nrows() != n || s.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} overlap"),
            found: format!("{}x{}", s.nrows(), s.ncols()),
        });
    }
    let llt = s.llt(Side::Lower).map_err(|_| Error::IllConditioned {
        estimate: f64::INFINITY,
    })?;
    let estimate = cholesky_condition_bound(llt.L());
    if !(estimate <= max_condition) {
        return Err(Error::IllConditioned { estimate });
    }
    let mut x = g.adjoint().to_owned();
    llt.solve_in_place(&mut x);
    let b = x.adjoint().to_owned();
    if b.as_ref().norm_max().is_finite() {
        Ok(b)
    } else {
        Err(Error::IllConditioned {
            estimate: f64::INFINITY,
        })
    }
}

/// Sampled Gaussians, their overlap and the bi-orthogonal duals.
#[derive(Debug, Clone)]
pub struct BasisMatrices {
    lattice: VnLatticeSpec,
    g: CMat,
    s: CMat,
    b: CMat,
}

impl BasisMatrices {
    pub fn build(lattice: &VnLatticeSpec) -> Result<Self> {
        let g = gaussian_samples(lattice);
        let s = lattice_overlap(lattice);
        let b = dual_samples(g.as_ref(), s.as_ref())?;
        Ok(Self {
            lattice: *lattice,
            g,
            s,
            b,
        })
    }

    pub fn lattice(&self) -> &VnLatticeSpec {
        &self.lattice
    }

    pub fn g(&self) -> &CMat {
        &self.g
    }

    pub fn s(&self) -> &CMat {
        &self.s
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }
}
