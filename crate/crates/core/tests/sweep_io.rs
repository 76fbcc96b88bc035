use std::fs;

use unruh_dpt::lindblad::{evolve_density, EvolveOptions, Liouvillian, Phase};
use unruh_dpt::sweep::{
    derivative_scan, emit, read_json, refinement_scaling, run_sweep, sweep_csv, Format, InitialState, NamedState,
    Observable, ObservationMode, SweepConfig, SWEEP_HEADER,
};
use unruh_dpt::symmetry::{conserved_quantity, symmetry_residual, DEFAULT_KAPPAS};
use unruh_dpt::{DensityMatrix, DissipationCoefficients};

fn config(points: usize) -> SweepConfig {
    SweepConfig {
        points,
        ..SweepConfig::default()
    }
}

#[test]
fn five_rows_make_six_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    emit(&run_sweep(&config(5)).unwrap(), Format::Csv, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert_eq!(text.lines().next().unwrap(), SWEEP_HEADER);
}

#[test]
fn json_round_trips_to_identical_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let rows = run_sweep(&config(25)).unwrap();
    emit(&rows, Format::Json, &path).unwrap();
    assert_eq!(read_json(&path).unwrap(), rows);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(60);
    for format in [Format::Csv, Format::Json] {
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        emit(&run_sweep(&cfg).unwrap(), format, &a).unwrap();
        emit(&run_sweep(&cfg).unwrap(), format, &b).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
}

#[test]
fn emit_reports_unwritable_path() {
    let rows = run_sweep(&config(3)).unwrap();
    let err = emit(&rows, Format::Csv, std::path::Path::new("/nonexistent/dir/out.csv")).unwrap_err();
    assert!(matches!(err, unruh_dpt::Error::Io(_)));
}

#[test]
fn finite_mode_relaxes_slowly_near_threshold() {
    let cfg = SweepConfig {
        points: 30,
        mode: ObservationMode::Finite { tau_obs: 20.0 },
        ..SweepConfig::default()
    };
    let rows = run_sweep(&cfg).unwrap();
    let alpha_c = cfg.critical_acceleration().unwrap();
    // deep in the thermal phase the state has relaxed
    let last = rows.last().unwrap();
    assert!(last.mc.abs() < 1e-6, "{last:?}");
    // just below threshold the singlet has barely moved: critical slowing-down
    let near = rows.iter().rfind(|r| r.alpha < alpha_c).unwrap();
    assert!(near.mc < -0.4, "{near:?}");
    assert!(near.gap.unwrap() < 0.1);
}

#[test]
fn thermal_rows_satisfy_branch_identities() {
    for row in run_sweep(&config(80)).unwrap() {
        if row.phase == Phase::Thermal {
            assert_eq!(row.mc, 0.0);
            assert_eq!(row.mzz, row.mz * row.mz / 4.0);
        }
    }
}

#[test]
fn critical_matches_derivative_peak() {
    let cfg = config(120);
    let rows = run_sweep(&cfg).unwrap();
    let scan = derivative_scan(&rows, Observable::Mc).unwrap();
    assert!(scan.within_one_cell(cfg.critical_acceleration().unwrap()));
}

#[test]
fn jump_scaling_under_refinement() {
    let r = refinement_scaling(&config(100), Observable::Mc).unwrap();
    assert!((1.6..=2.4).contains(&r.ratio), "{r:?}");
    assert!(r.indicates_divergence());
}

#[test]
fn custom_initial_state_enters_localized_branch() {
    let cfg = SweepConfig {
        points: 20,
        initial: InitialState::Named(NamedState::Product00),
        ..SweepConfig::default()
    };
    let rows = run_sweep(&cfg).unwrap();
    let first = &rows[0];
    // Q = 1/4 for |00>, the localized branch keeps it
    assert!((first.mc + first.mzz - 0.25).abs() < 1e-12);
    let csv = sweep_csv(&rows);
    assert!(csv.lines().nth(1).unwrap().contains(",localized,"));
}

// Q is linear in ρ and the RK4 propagator is a polynomial in L̂, so at
// full cooperativity Q is conserved to round-off at any step size; there is
// no truncation-error drift to shrink when dt is halved.
#[test]
fn exchange_correlation_drift_is_round_off_at_any_step() {
    let l = Liouvillian::from_coefficients(DissipationCoefficients::with_cooperativity(4.0, 1.0, 1.0)).unwrap();
    let rho = DensityMatrix::product(false, false);
    for dt in [4e-4, 2e-4] {
        let traj = evolve_density(&l, &rho, &EvolveOptions::new(10.0, 50).with_dt(dt)).unwrap();
        assert!(conserved_quantity(&traj).max_drift < 1e-12, "dt = {dt}");
    }
}

#[test]
fn conjugation_and_commutator_criteria_agree() {
    let c0 = 1e3;
    let tol = 1e-12;
    for f in [1.0, 0.999, 0.9, 0.8, 0.5, 0.0] {
        let l = Liouvillian::from_coefficients(DissipationCoefficients::with_cooperativity(4.0, 1.0, f)).unwrap();
        let r = symmetry_residual(&l, &DEFAULT_KAPPAS);
        assert_eq!(r.conjugation < tol, r.commutator < tol * c0, "f = {f}: {r:?}");
    }
}
