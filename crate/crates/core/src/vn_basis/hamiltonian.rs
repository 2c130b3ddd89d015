use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::fgh::GridHamiltonian;
use crate::linalg::{hermitize, principal_submatrix, select_columns, CMat};

use super::prune::PruneMask;

/// `H Z` for real `H` and complex `Z`, as two real products.
pub(crate) fn real_times_complex(h: MatRef<'_, f64>, z: MatRef<'_, c64>) -> CMat {
    let re = Mat::from_fn(z.nrows(), z.ncols(), |i, j| z[(i, j)].re);
    let im = Mat::from_fn(z.nrows(), z.ncols(), |i, j| z[(i, j)].im);
    let hre = h * &re;
    let him = h * &im;
    Mat::from_fn(h.nrows(), z.ncols(), |i, j| {
        c64::new(hre[(i, j)], him[(i, j)])
    })
}

/// `Z† H Z`, symmetrized.
fn sandwich(z: MatRef<'_, c64>, h: &GridHamiltonian) -> Result<CMat> {
    if z.nrows() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} grid rows", h.dim()),
            found: format!("{} rows", z.nrows()),
        });
    }
    let hz = real_times_complex(h.matrix().as_ref(), z);
    Ok(hermitize((z.adjoint() * &hz).as_ref()))
}

/// `(G† H G, G† G)`.
pub fn pvn_hamiltonian(g: MatRef<'_, c64>, h: &GridHamiltonian) -> Result<(CMat, CMat)> {
    let hp = sandwich(g, h)?;
    let s = hermitize((g.adjoint() * g).as_ref());
    Ok((hp, s))
}

/// `(B† H B, B† B)`; the second matrix equals `S⁻¹`.
pub fn bvn_hamiltonian(b: MatRef<'_, c64>, h: &GridHamiltonian) -> Result<(CMat, CMat)> {
    let hb = sandwich(b, h)?;
    let s = hermitize((b.adjoint() * b).as_ref());
    Ok((hb, s))
}

/// The bvN pencil restricted to the kept cells, built from the kept dual
/// columns only. Equal to `restrict(bvn_hamiltonian(B, H), mask)`.
pub fn bvn_hamiltonian_restricted(
    b: MatRef<'_, c64>,
    h: &GridHamiltonian,
    mask: &PruneMask,
) -> Result<(CMat, CMat)> {
    check_mask(mask, b.ncols())?;
    let bk = select_columns(b, mask.kept());
    let hk = sandwich(bk.as_ref(), h)?;
    let sk = hermitize((bk.adjoint() * &bk).as_ref());
    Ok((hk, sk))
}

fn check_mask(mask: &PruneMask, dim: usize) -> Result<()> {
    if let Some(&last) = mask.kept().last() {
        if last >= dim {
            return Err(Error::IndexOutOfRange {
                index: last,
                size: dim,
            });
        }
    }
    Ok(())
}

/// Principal submatrices of `h` and `s` on the kept indices.
pub fn restrict(h: MatRef<'_, c64>, s: MatRef<'_, c64>, mask: &PruneMask) -> Result<(CMat, CMat)> {
    if h.nrows() != s.nrows() || h.ncols() != s.ncols() || h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: "two square matrices of equal size".into(),
            found: format!(
                "{}x{} and {}x{}",
                h.nrows(),
                h.ncols(),
                s.nrows(),
                s.ncols()
            ),
        });
    }
    check_mask(mask, h.nrows())?;
    Ok((
        principal_submatrix(h, mask.kept()),
        principal_submatrix(s, mask.kept()),
    ))
}
