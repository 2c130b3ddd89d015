use pvn_bench::config::{ExperimentConfig, PruneSelection};
use pvn_bench::presets::preset_text;
use pvn_bench::{find_ecut, preset, run_experiment, sweep_hbar, BenchError, RunOptions};

fn sweep_config(hbars: &str, n_x: &str, n_p: &str) -> ExperimentConfig {
    let text = preset_text("morse-sweep")
        .unwrap()
        .replace(
            "hbar_values = 1, 0.5, 0.25, 0.125, 0.0625",
            &format!("hbar_values = {hbars}"),
        )
        .replace(
            "n_x_values = 12, 16, 24, 32, 48",
            &format!("n_x_values = {n_x}"),
        )
        .replace(
            "n_p_values = 6, 9, 12, 18, 24",
            &format!("n_p_values = {n_p}"),
        );
    ExperimentConfig::from_ini_str(&text, None).unwrap()
}

#[test]
fn single_point_sweep_equals_a_manual_run() {
    let base = sweep_config("0.5", "16", "9");
    let report = sweep_hbar(&base, Some(4)).unwrap();
    assert_eq!(report.points.len(), 1);
    let point = &report.points[0];
    let bvn = point.bvn.as_ref().expect("gate met");

    let mut manual = base.sweep_point(0).unwrap();
    assert_eq!(
        point.config.prune.as_ref().unwrap().selection,
        PruneSelection::EnergyCut(point.e_cut.unwrap())
    );
    manual.prune = point.config.prune.clone();
    let states = manual
        .potential
        .count_states_below(manual.grid.hbar, report.e_shell)
        .unwrap();
    manual.report.n_levels = Some(states);
    manual.report.tolerance_digits = Some(4);
    let doc = run_experiment(&manual, &RunOptions::default()).unwrap();
    assert_eq!(doc.basis_size, bvn.basis_size);
    assert_eq!(states, bvn.states_below_cut);
    assert_eq!(doc.max_abs_error, point.max_abs_error);
    assert_eq!(doc.gate_passed, Some(true));
    assert_eq!(bvn.eta, doc.basis_size as f64 / states as f64);
}

#[test]
fn sweeps_are_deterministic() {
    let base = sweep_config("1, 0.5", "12, 16", "6, 9");
    let strip = |mut r: pvn_bench::SweepReport| {
        for p in &mut r.points {
            p.elapsed_seconds = 0.0;
        }
        r
    };
    let a = strip(sweep_hbar(&base, Some(4)).unwrap());
    let b = strip(sweep_hbar(&base, Some(4)).unwrap());
    assert_eq!(a, b);
    let etas: Vec<f64> = a.bvn_points().iter().map(|p| p.eta).collect();
    assert_eq!(etas.len(), 2);
    assert!(etas[1] < etas[0]);
}

#[test]
fn unreachable_gates_are_recorded_per_point() {
    let base = sweep_config("1", "12", "6");
    let report = sweep_hbar(&base, Some(12)).unwrap();
    let failures = report.failures();
    assert_eq!(failures.len(), 1);
    assert!(failures[0].1.contains("unreachable"));
    assert!(report.bvn_points().is_empty());
    assert_eq!(report.rectangle_points().len(), 1);
}

#[test]
fn sweeps_need_a_sweep_section() {
    let err = sweep_hbar(&preset("morse-bvn").unwrap(), None).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn nearest_count_fallback_on_the_coulomb_lattice() {
    let config = preset("coulomb-bvn").unwrap();
    let exact = find_ecut(&config, 189).unwrap();
    assert!(exact.is_exact());
    let steps =
        pvn_bench::ecut::achievable_counts(&config.lattice_spec().unwrap(), &config.potential)
            .unwrap();
    let missing = (1..1599)
        .find(|k| !steps.iter().any(|s| s.0 == *k) && *k > 100)
        .expect("some count is skipped");
    let near = find_ecut(&config, missing).unwrap();
    assert!(!near.is_exact());
    let warning = near.warning.unwrap();
    assert!(warning.contains(&near.lower_neighbor.unwrap().to_string()));
    assert!(warning.contains(&near.upper_neighbor.unwrap().to_string()));
}

#[test]
fn exit_codes_follow_the_error_kind() {
    use pvn_core::Error;
    assert_eq!(BenchError::config("grid.hbar", "bad").exit_code(), 2);
    assert_eq!(
        BenchError::from(Error::NumericalFailure("x".into())).exit_code(),
        3
    );
    assert_eq!(BenchError::AccuracyGate("x".into()).exit_code(), 4);
    let doc = run_experiment(&preset("morse-fgh").unwrap(), &RunOptions::default()).unwrap();
    assert_eq!(doc.gate_result().unwrap_err().exit_code(), 4);
}
