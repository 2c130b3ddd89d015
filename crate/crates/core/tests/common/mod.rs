#![allow(dead_code)]

use faer::{Mat, MatRef};
use pvn_core::{c64, make_grid, make_lattice, PotentialModel, TabulatedPotential, VnLatticeSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Lattice shapes with `n_x * n_p <= 24`.
pub const SMALL_SHAPES: &[(usize, usize)] = &[
    (4, 3),
    (3, 4),
    (4, 4),
    (5, 4),
    (6, 3),
    (4, 5),
    (6, 4),
    (4, 6),
];

pub fn harmonic_lattice() -> (VnLatticeSpec, PotentialModel) {
    let grid = make_grid(-5.0, 10.0, 16, 1.0).unwrap();
    (
        make_lattice(grid, 4, 4, Some(0.5)).unwrap(),
        PotentialModel::harmonic(1.0, 1.0).unwrap(),
    )
}

/// A confining well plus a few random cosine ripples, tabulated finely
/// enough that the linear interpolation is smooth on the grid scale.
pub fn random_smooth_potential(rng: &mut ChaCha8Rng, x_min: f64, length: f64) -> PotentialModel {
    let center = x_min + 0.5 * length;
    let curvature = rng.gen_range(0.2..2.0);
    let ripples: Vec<(f64, f64, f64)> = (0..3)
        .map(|k| {
            (
                rng.gen_range(-0.5..0.5),
                (k + 1) as f64 * 2.0 * std::f64::consts::PI / length,
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let samples = 2001;
    let xs: Vec<f64> = (0..samples)
        .map(|i| x_min - 1.0 + (length + 2.0) * i as f64 / (samples - 1) as f64)
        .collect();
    let vs: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let d = x - center;
            0.5 * curvature * d * d
                + ripples
                    .iter()
                    .map(|&(amp, k, phase)| amp * (k * x + phase).cos())
                    .sum::<f64>()
        })
        .collect();
    let mass = rng.gen_range(0.5..2.0);
    PotentialModel::tabulated(mass, TabulatedPotential::new(xs, vs).unwrap()).unwrap()
}

/// A random small lattice with a random α around the default and a random
/// smooth potential on it.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (VnLatticeSpec, PotentialModel) {
    let (n_x, n_p) = SMALL_SHAPES[rng.gen_range(0..SMALL_SHAPES.len())];
    let length = rng.gen_range(6.0..14.0);
    let x_min = rng.gen_range(-10.0..-4.0);
    let hbar = rng.gen_range(0.5..1.5);
    let grid = make_grid(x_min, length, n_x * n_p, hbar).unwrap();
    let probe = make_lattice(grid, n_x, n_p, None).unwrap();
    let alpha = probe.default_alpha() * rng.gen_range(0.7..1.4);
    let lattice = make_lattice(grid, n_x, n_p, Some(alpha)).unwrap();
    (lattice, random_smooth_potential(rng, x_min, length))
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

pub fn identity_defect(m: MatRef<'_, c64>) -> f64 {
    let eye = Mat::<c64>::identity(m.nrows(), m.ncols());
    max_abs((m - &eye).as_ref())
}

pub fn max_relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1e-300))
        .fold(0.0, f64::max)
}
