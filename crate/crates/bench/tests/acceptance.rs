//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p pvn-bench --test acceptance`.
//!
//! Physical parameters come from the presets; the thresholds below are the
//! acceptance limits.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use faer::{Mat, MatRef, Side};
use pvn_bench::config::ToleranceKind;
use pvn_bench::{preset, run_experiment, sweep_hbar, ExperimentConfig, RunOptions};
use pvn_core::eigensolve::generalized_hermitian_eig;
use pvn_core::fgh::{fgh_hamiltonian, kinetic_matrix, solve_fgh};
use pvn_core::vn_basis::{
    center_energies, prune_mask, pvn_hamiltonian, BasisMatrices, PruneMask, VnProblem,
};
use pvn_core::{c64, make_grid, make_lattice, PotentialModel, TabulatedPotential, VnLatticeSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Harmonic FGH errors `E_n - (n + 1/2)` for n = 0..8 on the 16-point
/// preset, recorded on the first verified run and cross-checked against an
/// independent dense diagonalization.
const HARMONIC_FGH_ERRORS: [f64; 8] = [
    -1.294_77e-10,
    6.199_73e-9,
    -1.433_328e-7,
    2.081_345e-6,
    -2.193_973e-5,
    1.700_231e-4,
    -1.075_414e-3,
    5.138_501e-3,
];

/// Shell-area ratio of the Morse well at E = 11.25.
const MORSE_AREA_RATIO: f64 = 1.6959;

struct Verdict {
    pass: bool,
    summary: String,
}

impl Verdict {
    fn new(checks: &[(bool, String)]) -> Self {
        let summary = checks
            .iter()
            .map(|(ok, text)| {
                if *ok {
                    text.clone()
                } else {
                    format!("NOT MET {text}")
                }
            })
            .collect::<Vec<_>>()
            .join("; ");
        Self {
            pass: checks.iter().all(|c| c.0),
            summary,
        }
    }
}

fn timed<T>(work: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = work();
    (out, start.elapsed())
}

fn runtime_check(elapsed: Duration, limit_seconds: f64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (
        s < limit_seconds,
        format!("runtime {s:.2} s (limit {limit_seconds} s)"),
    )
}

fn load(name: &str) -> ExperimentConfig {
    preset(name).unwrap_or_else(|e| panic!("preset {name}: {e}"))
}

fn max_rel_dev(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "spectrum lengths differ");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs())
        .fold(0.0, f64::max)
}

fn max_abs(m: MatRef<'_, c64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

fn harmonic_lattice(config: &ExperimentConfig) -> (VnLatticeSpec, PotentialModel) {
    (config.lattice_spec().unwrap(), config.potential.clone())
}

fn full_fgh(lattice: &VnLatticeSpec, model: &PotentialModel) -> Vec<f64> {
    let h = fgh_hamiltonian(lattice.grid(), model).unwrap();
    solve_fgh(&h, lattice.n_cells()).unwrap().eigenvalues
}

fn criterion_1() -> Verdict {
    let config = load("harmonic-pvn");
    let (lattice, model) = harmonic_lattice(&config);
    let ((fgh, pvn), elapsed) = timed(|| {
        let fgh = full_fgh(&lattice, &model);
        let pvn = VnProblem::new(&lattice, &model)
            .unwrap()
            .solve_pvn()
            .unwrap();
        (fgh, pvn.eigenvalues)
    });
    let dev = max_rel_dev(&pvn, &fgh);
    Verdict::new(&[
        (pvn.len() == 16, format!("{} pvN eigenvalues", pvn.len())),
        (
            dev <= 1e-8,
            format!("pvN vs FGH max relative deviation {dev:.2e} (limit 1e-8)"),
        ),
        runtime_check(elapsed, 1.0),
    ])
}

fn criterion_2() -> Verdict {
    let config = load("harmonic-bvn");
    let (lattice, model) = harmonic_lattice(&config);
    let ((fgh, bvn), elapsed) = timed(|| {
        let fgh = full_fgh(&lattice, &model);
        let (mask, _) = pvn_bench::runner::resolve_mask(&config).unwrap();
        assert!(mask.is_full(), "harmonic-bvn preset keeps every cell");
        let bvn = VnProblem::new(&lattice, &model)
            .unwrap()
            .solve_bvn(&mask)
            .unwrap();
        (fgh, bvn.eigenvalues)
    });
    let dev = max_rel_dev(&bvn, &fgh);
    Verdict::new(&[
        (bvn.len() == 16, format!("{} bvN eigenvalues", bvn.len())),
        (
            dev <= 1e-6,
            format!("full bvN vs FGH max relative deviation {dev:.2e} (limit 1e-6)"),
        ),
        runtime_check(elapsed, 1.0),
    ])
}

fn criterion_3() -> Verdict {
    let fgh_config = load("harmonic-fgh");
    let pvn_config = load("harmonic-pvn");
    let vn_config = load("harmonic-vn-analytic");
    let ((fgh, pvn, vn), elapsed) = timed(|| {
        let run = |c: &ExperimentConfig| {
            let doc = run_experiment(c, &RunOptions::default()).unwrap();
            doc.levels.iter().map(|r| r.error).collect::<Vec<f64>>()
        };
        (run(&fgh_config), run(&pvn_config), run(&vn_config))
    });
    let mut checks = Vec::new();
    for (name, errors) in [("FGH", &fgh), ("pvN", &pvn)] {
        let worst = errors[..4].iter().map(|e| e.abs()).fold(0.0, f64::max);
        let outside: Vec<String> = (0..4)
            .filter(|&n| errors[n].abs() > 1e-6)
            .map(|n| format!("n={n} ({:.3e})", errors[n]))
            .collect();
        checks.push((
            outside.is_empty(),
            if outside.is_empty() {
                format!("{name} lowest 4 within 1e-6 (worst {worst:.2e})")
            } else {
                format!("{name} lowest 4 outside 1e-6 at {}", outside.join(", "))
            },
        ));
        let beaten = (4..8).all(|n| errors[n].abs() < vn[n].abs());
        checks.push((
            beaten,
            format!("{name} beats vn-analytic at levels 4-7: {beaten}"),
        ));
    }
    let drift = (0..8)
        .map(|n| {
            (fgh[n] - HARMONIC_FGH_ERRORS[n]).abs() / (HARMONIC_FGH_ERRORS[n].abs() * 1e-4 + 1e-12)
        })
        .fold(0.0, f64::max);
    checks.push((
        drift <= 1.0,
        format!("FGH errors match recorded values (drift {drift:.2} of allowance)"),
    ));
    let pvn_gap = (0..8).map(|n| (pvn[n] - fgh[n]).abs()).fold(0.0, f64::max);
    checks.push((
        pvn_gap <= 1e-8,
        format!("pvN errors equal FGH errors within {pvn_gap:.1e}"),
    ));
    checks.push(runtime_check(elapsed, 1.0));
    Verdict::new(&checks)
}

/// Every level of a preset run within `limit` (absolute or relative per the preset).
fn level_checks(
    name: &str,
    expected_levels: usize,
    limit: f64,
) -> (Vec<(bool, String)>, Duration, usize) {
    let config = load(name);
    let (doc, elapsed) = timed(|| run_experiment(&config, &RunOptions::default()).unwrap());
    let kind = match config.report.tolerance {
        ToleranceKind::Absolute => "absolute",
        ToleranceKind::Relative => "relative",
    };
    let outside: Vec<String> = doc
        .levels
        .iter()
        .filter(|r| !(r.error.abs() <= limit))
        .map(|r| format!("n={} {:.2e}", r.quantum_number, r.error))
        .collect();
    let worst = doc.max_abs_error.unwrap_or(f64::NAN);
    let mut checks = vec![(
        doc.levels.len() == expected_levels,
        format!("{} of {expected_levels} levels compared", doc.levels.len()),
    )];
    checks.push((
        outside.is_empty(),
        if outside.is_empty() {
            format!("all within {limit:e} {kind} (worst {worst:.2e})")
        } else {
            format!(
                "{} of {} levels outside {limit:e} {kind}, worst {worst:.2e} [{}]",
                outside.len(),
                doc.levels.len(),
                outside.join(", ")
            )
        },
    ));
    (checks, elapsed, doc.basis_size)
}

fn criterion_4() -> Verdict {
    let (mut checks, elapsed, basis) = level_checks("morse-fgh", 24, 5e-5);
    checks.insert(0, (basis == 100, format!("{basis} grid points")));
    checks.push(runtime_check(elapsed, 1.0));
    Verdict::new(&checks)
}

fn criterion_5() -> Verdict {
    let config = load("morse-bvn");
    let (selection, search) = timed(|| pvn_bench::find_ecut(&config, 48).unwrap());
    let (mut checks, elapsed, basis) = level_checks("morse-bvn", 24, 5e-5);
    checks.insert(
        0,
        (
            basis == selection.achieved_count
                && (selection.is_exact() || selection.warning.is_some()),
            format!(
                "mask of {basis} cells (target 48, e_cut {:.4})",
                selection.e_cut
            ),
        ),
    );
    checks.push(runtime_check(elapsed + search, 1.0));
    Verdict::new(&checks)
}

fn criterion_6() -> Verdict {
    let (mut checks, elapsed, basis) = level_checks("coulomb-fgh", 9, 5e-5);
    checks.insert(0, (basis == 1599, format!("{basis} grid points")));
    checks.push(runtime_check(elapsed, 30.0));
    Verdict::new(&checks)
}

fn criterion_7() -> Verdict {
    let (mut checks, elapsed, basis) = level_checks("coulomb-bvn", 9, 5e-5);
    checks.insert(0, (basis == 189, format!("{basis}x{basis} pruned solve")));
    checks.push(runtime_check(elapsed, 5.0));
    Verdict::new(&checks)
}

fn criterion_8() -> Verdict {
    let config = load("morse-sweep");
    // 4-digit relaxed gate, the "4 digits of accuracy" of the Morse runs
    let (report, elapsed) = timed(|| sweep_hbar(&config, Some(4)).unwrap());
    let hbars: Vec<f64> = report.points.iter().map(|p| p.hbar).collect();
    let etas: Vec<Option<f64>> = report
        .points
        .iter()
        .map(|p| p.bvn.as_ref().map(|b| b.eta))
        .collect();
    let shown: Vec<String> = report
        .points
        .iter()
        .zip(&etas)
        .map(|(p, e)| {
            format!(
                "{}:{}",
                p.hbar,
                e.map_or("fail".into(), |e| format!("{e:.3}"))
            )
        })
        .collect();
    let all_solved = etas.iter().all(Option::is_some);
    let decreasing = all_solved && etas.windows(2).all(|w| w[1].unwrap() < w[0].unwrap());
    let last = etas.last().copied().flatten().unwrap_or(f64::INFINITY);
    let rect = report.points.last().map_or(f64::NAN, |p| p.rectangle.eta);
    let rect_dev = (rect - MORSE_AREA_RATIO).abs() / MORSE_AREA_RATIO;
    let ratio = report.shell.area_ratio;
    Verdict::new(&[
        (
            hbars.len() >= 4 && hbars.windows(2).all(|w| w[1] < w[0]),
            format!("{} descending hbar values", hbars.len()),
        ),
        (all_solved, "every point met the gate".to_string()),
        (
            decreasing,
            format!("bvN eta strictly decreasing [{}]", shown.join(", ")),
        ),
        (
            last <= 1.15,
            format!("final bvN eta {last:.3} (limit 1.15)"),
        ),
        (
            rect_dev <= 0.10,
            format!(
                "rectangle eta {rect:.4} at smallest hbar, {:.2}% from {MORSE_AREA_RATIO}",
                100.0 * rect_dev
            ),
        ),
        (
            (ratio - MORSE_AREA_RATIO).abs() < 5e-5,
            format!("shell area ratio {ratio:.5}"),
        ),
        runtime_check(elapsed, 300.0),
    ])
}

fn random_instance(rng: &mut ChaCha8Rng) -> (VnLatticeSpec, PotentialModel) {
    const SHAPES: &[(usize, usize)] = &[
        (4, 3),
        (3, 4),
        (4, 4),
        (5, 4),
        (6, 3),
        (4, 5),
        (6, 4),
        (4, 6),
    ];
    let (n_x, n_p) = SHAPES[rng.gen_range(0..SHAPES.len())];
    let length = rng.gen_range(6.0..14.0);
    let x_min = rng.gen_range(-10.0..-4.0);
    let hbar = rng.gen_range(0.5..1.5);
    let grid = make_grid(x_min, length, n_x * n_p, hbar).unwrap();
    let probe = make_lattice(grid, n_x, n_p, None).unwrap();
    let lattice = make_lattice(
        grid,
        n_x,
        n_p,
        Some(probe.default_alpha() * rng.gen_range(0.7..1.4)),
    )
    .unwrap();

    let center = x_min + 0.5 * length;
    let curvature = rng.gen_range(0.2..2.0);
    let ripples: Vec<(f64, f64, f64)> = (1..=3)
        .map(|k| {
            (
                rng.gen_range(-0.5..0.5),
                k as f64 * std::f64::consts::TAU / length,
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let xs: Vec<f64> = (0..2001)
        .map(|i| x_min - 1.0 + (length + 2.0) * i as f64 / 2000.0)
        .collect();
    let vs: Vec<f64> = xs
        .iter()
        .map(|&x| {
            0.5 * curvature * (x - center).powi(2)
                + ripples
                    .iter()
                    .map(|&(a, k, ph)| a * (k * x + ph).cos())
                    .sum::<f64>()
        })
        .collect();
    let model = PotentialModel::tabulated(
        rng.gen_range(0.5..2.0),
        TabulatedPotential::new(xs, vs).unwrap(),
    )
    .unwrap();
    (lattice, model)
}

fn criterion_9() -> Verdict {
    let (worst, elapsed) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut cases = vec![harmonic_lattice(&load("harmonic-fgh"))];
        cases.extend((0..5).map(|_| random_instance(&mut rng)));
        let mut biorth = 0.0f64;
        let mut recon = 0.0f64;
        let mut kinetic_ok = true;
        let mut monotone_ok = true;
        let mut scale_dev = 0.0f64;
        for (lattice, model) in &cases {
            let n = lattice.n_cells();
            assert!(n <= 24);
            let basis = BasisMatrices::build(lattice).unwrap();
            let gb = basis.g().adjoint() * basis.b();
            biorth = biorth.max(max_abs((&gb - Mat::<c64>::identity(n, n)).as_ref()));

            let problem = VnProblem::new(lattice, model).unwrap();
            let fgh = solve_fgh(problem.hamiltonian(), n).unwrap();
            let psi = fgh.eigenvectors.clone();
            let rebuilt = basis.b() * (basis.g().adjoint() * &psi);
            recon = recon.max(max_abs((&rebuilt - &psi).as_ref()) / max_abs(psi.as_ref()));

            let t = kinetic_matrix(lattice.grid(), model.mass()).unwrap();
            let values = t.self_adjoint_eigenvalues(Side::Lower).unwrap();
            let top = values.iter().cloned().fold(0.0, f64::max);
            kinetic_ok &= values.iter().all(|&v| v >= -1e-12 * top);
            for i in 0..n {
                for j in 0..n {
                    kinetic_ok &= t[(i, j)] == t[(j, i)]
                        && (t[(i, j)] - t[((i + 1) % n, (j + 1) % n)]).abs() <= 1e-12 * top;
                }
            }

            let mut energies = center_energies(lattice, model).unwrap();
            energies.sort_by(f64::total_cmp);
            energies.dedup();
            let mut previous: Option<(PruneMask, Vec<f64>)> = None;
            for &e in &energies[energies.len() / 3..] {
                let mask = prune_mask(lattice, model, e).unwrap();
                let levels = problem.solve_bvn(&mask).unwrap().eigenvalues;
                if let Some((prev_mask, prev_levels)) = &previous {
                    monotone_ok &= prev_mask.kept().iter().all(|&c| mask.contains(c));
                    monotone_ok &= levels
                        .iter()
                        .zip(prev_levels)
                        .all(|(a, b)| *a <= b + 1e-9 * top);
                }
                previous = Some((mask, levels));
            }

            let h = problem.hamiltonian();
            let (h0, s0) = pvn_hamiltonian(basis.g().as_ref(), h).unwrap();
            let c = c64::new(rng.gen_range(0.1..5.0), rng.gen_range(-5.0..5.0));
            let g = Mat::from_fn(n, n, |i, j| basis.g()[(i, j)] * c);
            let (h1, s1) = pvn_hamiltonian(g.as_ref(), h).unwrap();
            let e0 = generalized_hermitian_eig(h0.as_ref(), s0.as_ref())
                .unwrap()
                .eigenvalues;
            let e1 = generalized_hermitian_eig(h1.as_ref(), s1.as_ref())
                .unwrap()
                .eigenvalues;
            let scale = e0.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            scale_dev = scale_dev.max(
                e0.iter()
                    .zip(&e1)
                    .map(|(a, b)| (a - b).abs() / scale)
                    .fold(0.0, f64::max),
            );
        }
        (
            biorth,
            recon,
            kinetic_ok,
            monotone_ok,
            scale_dev,
            cases.len(),
        )
    });
    let (biorth, recon, kinetic_ok, monotone_ok, scale_dev, count) = worst;
    Verdict::new(&[
        (count == 6, format!("{count} instances")),
        (biorth <= 1e-8, format!("max |G†B - I| {biorth:.1e}")),
        (
            recon <= 1e-8,
            format!("reconstruction error {recon:.1e} relative"),
        ),
        (
            kinetic_ok,
            format!("kinetic PSD and Toeplitz: {kinetic_ok}"),
        ),
        (monotone_ok, format!("pruning monotone: {monotone_ok}")),
        (
            scale_dev <= 1e-10,
            format!("scale invariance {scale_dev:.1e}"),
        ),
        runtime_check(elapsed, 10.0),
    ])
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("pvN matches FGH on the harmonic preset", criterion_1),
        ("full-mask bvN matches FGH", criterion_2),
        ("harmonic accuracy against vn-analytic", criterion_3),
        ("Morse FGH baseline", criterion_4),
        ("Morse bvN with 48 cells", criterion_5),
        ("Coulomb FGH baseline", criterion_6),
        ("Coulomb bvN with 189 cells", criterion_7),
        ("efficiency trend of the Morse sweep", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| Verdict {
            pass: false,
            summary: format!(
                "panicked: {}",
                e.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            ),
        });
        if !verdict.pass {
            failed += 1;
        }
        println!(
            "criterion {} {}: {title}: {}",
            k + 1,
            if verdict.pass { "PASS" } else { "FAIL" },
            verdict.summary
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
