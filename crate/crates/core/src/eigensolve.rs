//! Generalized Hermitian-definite eigenproblem `H U = s U E`.
//!
//! The primary path reduces the pencil with the Cholesky factor of `s`.
//! When `s` is not numerically positive definite the solver switches to the
//! spectral path, which projects onto the eigenvectors of `s` whose
//! eigenvalues exceed `threshold * λ_max`.

use faer::{c64, Mat, MatRef, Side};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{fix_phases, hermitize, CMat};

/// Relative cut used by the spectral fallback.
pub const DEFAULT_SPECTRAL_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct GeneralizedEigResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// One column per eigenvalue, `s`-normalized.
    pub eigenvectors: CMat,
    /// `max_i ‖H u_i - λ_i s u_i‖₂ / ‖u_i‖₂`.
    pub residual_max: f64,
    pub s_condition: f64,
    pub rank_deficient: bool,
    pub diagnostics: EigDiagnostics,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EigDiagnostics {
    /// The Cholesky path failed and the spectral path produced the result.
    pub fallback_used: bool,
    /// Number of overlap eigenmodes dropped by the spectral path.
    pub discarded_modes: usize,
}

fn check_pencil(h: MatRef<'_, c64>, s: MatRef<'_, c64>) -> Result<usize> {
    let n = h.nrows();
    if h.ncols() != n || s.nrows() != n || s.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("two square {n}x{n} matrices"),
            found: format!(
                "H {}x{}, s {}x{}",
                h.nrows(),
                h.ncols(),
                s.nrows(),
                s.ncols()
            ),
        });
    }
    if n == 0 {
        return Err(Error::invalid("H", "empty matrix"));
    }
    Ok(n)
}

fn hermitian_eig(m: MatRef<'_, c64>) -> Result<(Vec<f64>, CMat)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("Hermitian eigensolver: {e:?}")))?;
    let values: Vec<f64> = (0..m.nrows()).map(|i| evd.S()[i].re).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure(
            "Hermitian eigensolver returned non-finite eigenvalues".into(),
        ));
    }
    Ok((values, evd.U().to_owned()))
}

fn hermitian_eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    let values = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("Hermitian eigensolver: {e:?}")))?;
    Ok(values)
}

/// `max_i ‖H u_i - λ_i s u_i‖₂ / ‖u_i‖₂`.
pub fn generalized_residual(
    h: MatRef<'_, c64>,
    s: MatRef<'_, c64>,
    eigenvalues: &[f64],
    vectors: MatRef<'_, c64>,
) -> f64 {
    let hu = h * vectors;
    let su = s * vectors;
    let mut worst = 0.0f64;
    for (j, &lambda) in eigenvalues.iter().enumerate() {
        let mut r2 = 0.0;
        let mut u2 = 0.0;
        for i in 0..vectors.nrows() {
            r2 += (hu[(i, j)] - su[(i, j)] * lambda).norm_sqr();
            u2 += vectors[(i, j)].norm_sqr();
        }
        if u2 > 0.0 {
            worst = worst.max((r2 / u2).sqrt());
        }
    }
    worst
}

/// Ratio of the extreme eigenvalues of `s`; infinite when `s` is not positive definite.
pub fn condition_estimate(s: MatRef<'_, c64>) -> Result<f64> {
    let values = hermitian_eigenvalues(hermitize(s).as_ref())?;
    Ok(condition_from_spectrum(&values))
}

fn condition_from_spectrum(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Solves `H U = s U E` through `s = L L†`.
///
/// Falls back to [`spectral_regularized_eig`] with
/// [`DEFAULT_SPECTRAL_THRESHOLD`] when the factorization fails.
pub fn generalized_hermitian_eig(
    h: MatRef<'_, c64>,
    s: MatRef<'_, c64>,
) -> Result<GeneralizedEigResult> {
    check_pencil(h, s)?;
    let s_herm = hermitize(s);
    let llt = match s_herm.llt(Side::Lower) {
        Ok(llt) => llt,
        Err(_) => {
            let mut result =
                spectral_regularized_eig(h, s, DEFAULT_SPECTRAL_THRESHOLD).map_err(|e| {
                    Error::NumericalFailure(format!(
                        "Cholesky factorization of s failed and the spectral path failed too: {e}"
                    ))
                })?;
            result.diagnostics.fallback_used = true;
            return Ok(result);
        }
    };
    let l = llt.L();

    // C = L⁻¹ H L⁻†
    let mut left = h.to_owned();
    l.solve_lower_triangular_in_place(&mut left);
    let mut reduced = left.adjoint().to_owned();
    l.solve_lower_triangular_in_place(&mut reduced);
    let reduced = hermitize(reduced.as_ref());

    let (eigenvalues, mut vectors) = hermitian_eig(reduced.as_ref())?;
    l.adjoint().solve_upper_triangular_in_place(&mut vectors);
    fix_phases(&mut vectors);

    let residual_max = generalized_residual(h, s, &eigenvalues, vectors.as_ref());
    let s_condition = condition_estimate(s_herm.as_ref())?;
    Ok(GeneralizedEigResult {
        eigenvalues,
        eigenvectors: vectors,
        residual_max,
        s_condition,
        rank_deficient: false,
        diagnostics: EigDiagnostics::default(),
    })
}

/// Solves the pencil in the span of the eigenvectors of `s` with
/// eigenvalue at least `threshold * λ_max`.
pub fn spectral_regularized_eig(
    h: MatRef<'_, c64>,
    s: MatRef<'_, c64>,
    threshold: f64,
) -> Result<GeneralizedEigResult> {
    let n = check_pencil(h, s)?;
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid(
            "threshold",
            format!("must lie in (0, 1), got {threshold}"),
        ));
    }
    let (s_values, s_vectors) = hermitian_eig(hermitize(s).as_ref())?;
    let lambda_max = s_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cut = threshold * lambda_max;
    let kept: Vec<usize> = (0..n)
        .filter(|&i| s_values[i] >= cut && s_values[i] > 0.0)
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptySubspace { threshold });
    }

    // X = V_k Λ_k^{-1/2}, so X† s X = I on the retained subspace.
    let basis = Mat::from_fn(n, kept.len(), |i, j| {
        s_vectors[(i, kept[j])] * (1.0 / s_values[kept[j]].sqrt())
    });
    let projected = hermitize((basis.adjoint() * h * &basis).as_ref());
    let (eigenvalues, w) = hermitian_eig(projected.as_ref())?;
    let mut vectors = &basis * &w;
    fix_phases(&mut vectors);

    let lambda_min_kept = kept
        .iter()
        .map(|&i| s_values[i])
        .fold(f64::INFINITY, f64::min);
    let residual_max = generalized_residual(h, s, &eigenvalues, vectors.as_ref());
    Ok(GeneralizedEigResult {
        eigenvalues,
        eigenvectors: vectors,
        residual_max,
        s_condition: lambda_max / lambda_min_kept,
        rank_deficient: kept.len() < n,
        diagnostics: EigDiagnostics {
            fallback_used: false,
            discarded_modes: n - kept.len(),
        },
    })
}
