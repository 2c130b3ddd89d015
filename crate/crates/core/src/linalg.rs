//! Small dense-matrix helpers shared by the solvers.

use faer::{c64, Mat, MatRef};

pub type CMat = Mat<c64>;
pub type RMat = Mat<f64>;

pub fn to_complex(m: MatRef<'_, f64>) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| c64::new(m[(i, j)], 0.0))
}

/// `(A + A†) / 2`.
pub fn hermitize(m: MatRef<'_, c64>) -> CMat {
    assert_eq!(m.nrows(), m.ncols());
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * 0.5
    })
}

/// `max |A - A†|`.
pub fn hermiticity_defect(m: MatRef<'_, c64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: MatRef<'_, c64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

/// `max |A - I|`.
pub fn identity_defect(m: MatRef<'_, c64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let target = if i == j {
                c64::new(1.0, 0.0)
            } else {
                c64::new(0.0, 0.0)
            };
            worst = worst.max((m[(i, j)] - target).norm());
        }
    }
    worst
}

pub fn frobenius(m: MatRef<'_, c64>) -> f64 {
    m.norm_l2()
}

/// Principal submatrix on `indices` (rows and columns).
pub fn principal_submatrix(m: MatRef<'_, c64>, indices: &[usize]) -> CMat {
    Mat::from_fn(indices.len(), indices.len(), |i, j| {
        m[(indices[i], indices[j])]
    })
}

/// Columns `indices` of `m`.
pub fn select_columns(m: MatRef<'_, c64>, indices: &[usize]) -> CMat {
    Mat::from_fn(m.nrows(), indices.len(), |i, j| m[(i, indices[j])])
}

/// Rescales every column so its largest-magnitude entry is real and positive.
pub fn fix_phases(m: &mut CMat) {
    for j in 0..m.ncols() {
        let mut pivot = c64::new(0.0, 0.0);
        for i in 0..m.nrows() {
            if m[(i, j)].norm() > pivot.norm() {
                pivot = m[(i, j)];
            }
        }
        if pivot.norm() == 0.0 {
            continue;
        }
        let phase = pivot.conj() / pivot.norm();
        for i in 0..m.nrows() {
            m[(i, j)] *= phase;
        }
    }
}

/// Same as [`fix_phases`] for real matrices: the largest entry becomes positive.
pub fn fix_signs(m: &mut RMat) {
    for j in 0..m.ncols() {
        let mut pivot = 0.0f64;
        for i in 0..m.nrows() {
            if m[(i, j)].abs() > pivot.abs() {
                pivot = m[(i, j)];
            }
        }
        if pivot < 0.0 {
            for i in 0..m.nrows() {
                m[(i, j)] = -m[(i, j)];
            }
        }
    }
}
