use serde_json::{json, Value};
use smhd::{rectilinear_shock, FrontGeometry, PhysParams, SidePair, State};
use smhd_sim::{simulate, FvSolver, SimConfig, SimError};

fn config(v: Value) -> SimConfig {
    serde_json::from_value(v).unwrap()
}

fn shock_1d(ratio: f64, cells: usize, end: f64) -> SimConfig {
    config(json!({
        "dimensions": 1, "cells": [cells, 1], "x1": [-1.0, 1.0], "end_time": end,
        "boundary": {"x1_lower": "outflow", "x1_upper": "outflow"}, "record_every": 10,
        "initial": {"kind": "perturbed_shock", "shock": {"h_minus": 1.0, "ratio": ratio, "b1_plus": 0.5, "b2": 0.0}}
    }))
}

fn periodic_2d(n: usize, end: f64, initial: Value) -> SimConfig {
    config(json!({
        "dimensions": 2, "cells": [n, n], "x1": [0.0, 1.0], "x2": [0.0, 1.0], "end_time": end,
        "boundary": {"x1_lower": "periodic", "x1_upper": "periodic"}, "record_every": 5,
        "initial": initial
    }))
}

#[test]
fn uniform_state_is_preserved() {
    let state = json!({"h": 1.3, "v": [0.4, -0.2], "b": [0.7, 0.3]});
    for dims in [1, 2] {
        let cfg = config(json!({
            "dimensions": dims, "cells": [16, 12], "x1": [0.0, 2.0], "end_time": 0.5,
            "boundary": {"x1_lower": "outflow", "x1_upper": "outflow"},
            "initial": {"kind": "uniform", "state": state}
        }));
        let r = simulate(&cfg).unwrap();
        for v in &r.snapshot.values {
            for (a, b) in v.iter().zip([1.3, 0.4, -0.2, 0.7, 0.3]) {
                assert!((a - b).abs() < 1e-14, "{a} vs {b}");
            }
        }
    }
}

#[test]
fn stationary_shock_stays_put_and_conserves() {
    let cfg = shock_1d(2.0, 400, 5.0);
    let r = simulate(&cfg).unwrap();
    let dx = cfg.dx()[0];
    assert!(r.summary.max_front_drift.unwrap() < 2.0 * dx);
    assert!(r.summary.max_conservation_defect <= 1e-12);
    let last = r.records.last().unwrap();
    assert!(last.front_width < 10.0 * dx);
}

#[test]
fn reversed_shock_spreads() {
    let r = simulate(&shock_1d(0.5, 400, 1.0)).unwrap();
    let last = r.records.last().unwrap();
    let dx = 2.0 / 400.0;
    assert!(last.front_width.is_nan() || last.front_width >= 10.0 * dx, "width {}", last.front_width);
    assert!(r.summary.max_conservation_defect <= 1e-12);
}

#[test]
fn riemann_data_match_the_rectilinear_shock() {
    let p = PhysParams::default();
    let s = rectilinear_shock(1.0, 2.0, 0.5, 0.0, &p).unwrap();
    let pair = SidePair::new(s.plus_state(), s.minus_state(), FrontGeometry::flat(), p);
    let a = simulate(&shock_1d(2.0, 100, 0.5)).unwrap();
    let mut cfg = shock_1d(2.0, 100, 0.5);
    cfg.initial = serde_json::from_value(json!({"kind": "riemann", "pair": pair})).unwrap();
    let b = simulate(&cfg).unwrap();
    assert_eq!(a.snapshot.values, b.snapshot.values);
}

#[test]
fn one_and_two_dimensional_runs_agree_column_wise() {
    let mut c1 = shock_1d(0.5, 64, 0.3);
    c1.fixed_dt = Some(0.004);
    let mut c2 = c1.clone();
    c2.dimensions = 2;
    c2.cells = [64, 8];
    let a = simulate(&c1).unwrap();
    let b = simulate(&c2).unwrap();
    for j in 0..8 {
        for i in 0..64 {
            let (x, y) = (a.snapshot.at(i, 0), b.snapshot.at(i, j));
            for k in 0..5 {
                assert!((x[k] - y[k]).abs() < 1e-14, "cell ({i},{j}) component {k}");
            }
        }
    }
}

#[test]
fn periodic_runs_conserve_all_integrals() {
    let r = simulate(&periodic_2d(32, 0.3, json!({"kind": "smooth_vortex", "amplitude": 0.2}))).unwrap();
    assert!(r.summary.max_conservation_defect <= 1e-12);
    let (first, last) = (r.records[0], *r.records.last().unwrap());
    for (a, b) in [(first.mass, last.mass), (first.mom_x, last.mom_x), (first.flux_by, last.flux_by)] {
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn divergence_residual_tracks_the_grid() {
    let run = |n| simulate(&periodic_2d(n, 0.5, json!({"kind": "smooth_vortex"}))).unwrap().summary;
    let (a, b) = (run(32), run(64));
    for s in [&a, &b] {
        assert!(s.max_div_norm.unwrap() <= 10.0 * s.initial_div_norm.unwrap());
    }
    let ratio = b.max_div_norm.unwrap() / a.max_div_norm.unwrap();
    assert!((0.35..=0.65).contains(&ratio), "ratio {ratio}");
}

#[test]
fn manufactured_solution_converges_at_first_order() {
    let errs: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&n| simulate(&periodic_2d(n, 0.5, json!({"kind": "manufactured"}))).unwrap().summary.l1_error.unwrap())
        .collect();
    let rate = (errs[0] / errs[2]).log2() / 2.0;
    assert!(rate >= 0.8, "errors {errs:?}, rate {rate}");
}

#[test]
fn runs_are_bitwise_reproducible_across_thread_counts() {
    let cfg = periodic_2d(24, 0.2, json!({"kind": "smooth_vortex"}));
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| simulate(&cfg).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a.snapshot.values, b.snapshot.values);
    let bits = |r: &smhd_sim::SimResult| {
        r.records
            .iter()
            .flat_map(|x| [x.t, x.mass, x.mom_x, x.energy, x.div_norm, x.h_min].map(f64::to_bits))
            .collect::<Vec<_>>()
    };
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn invalid_configurations_are_rejected() {
    let mut c = shock_1d(2.0, 64, 1.0);
    c.cfl = 1.2;
    assert!(matches!(simulate(&c), Err(SimError::CflViolation(_))));
    let mut c = shock_1d(2.0, 64, 1.0);
    c.fixed_dt = Some(1.0);
    assert!(matches!(simulate(&c), Err(SimError::CflViolation(_))));
    let mut c = shock_1d(2.0, 4, 1.0);
    c.cells = [4, 1];
    assert!(matches!(simulate(&c), Err(SimError::Config(_))));
    let mut c = shock_1d(2.0, 64, 1.0);
    c.end_time = 0.0;
    assert!(matches!(simulate(&c), Err(SimError::Config(_))));
    let mut c = shock_1d(2.0, 64, 1.0);
    c.x1 = [1.0, -1.0];
    assert!(matches!(simulate(&c), Err(SimError::Config(_))));
    assert!(matches!(SimConfig::from_json("{\"dimensions\": 1}"), Err(SimError::Parse(_))));
}

#[test]
fn perturbation_wavenumber_must_fit_the_period() {
    let cfg = config(json!({
        "dimensions": 2, "cells": [32, 16], "x1": [-1.0, 1.0], "end_time": 0.1,
        "boundary": {"x1_lower": "outflow", "x1_upper": "outflow"},
        "initial": {"kind": "perturbed_shock", "shock": {"h_minus": 1.0, "ratio": 2.0, "b1_plus": 0.5, "b2": 0.0},
                    "amplitude": 0.01, "wavenumber": 3.0}
    }));
    assert!(matches!(simulate(&cfg), Err(SimError::Config(_))));
}

#[test]
fn perturbed_shock_experiment_limits_amplitude() {
    let p = PhysParams::default();
    let s = rectilinear_shock(1.0, 2.0, 0.5, 0.0, &p).unwrap();
    let cfg = config(json!({
        "dimensions": 2, "cells": [32, 16], "x1": [-1.0, 1.0], "end_time": 0.2,
        "boundary": {"x1_lower": "outflow", "x1_upper": "outflow"},
        "initial": {"kind": "manufactured"}
    }));
    assert!(matches!(
        smhd_sim::perturbed_shock_experiment(&s, 0.1, std::f64::consts::TAU, &cfg),
        Err(SimError::Config(_))
    ));
    let r = smhd_sim::perturbed_shock_experiment(&s, 0.01, std::f64::consts::TAU, &cfg).unwrap();
    assert!(r.summary.initial_front_amp.unwrap() > 0.005);
}

#[test]
fn vacuum_formation_keeps_heights_positive() {
    // HLL with Davis bounds is positivity preserving even at the stability limit
    let pair = SidePair::new(
        State::new(0.1, [4.0, 0.0], [0.0; 2]),
        State::new(0.1, [-4.0, 0.0], [0.0; 2]),
        FrontGeometry::flat(),
        PhysParams::default(),
    );
    let mut cfg = shock_1d(2.0, 64, 0.5);
    cfg.initial = serde_json::from_value(json!({"kind": "riemann", "pair": pair})).unwrap();
    cfg.fixed_dt = Some(0.0072);
    let r = simulate(&cfg).unwrap();
    assert!(r.records.iter().all(|x| x.h_min > 0.0));
    assert!(r.records.last().unwrap().mass < 1e-2 * r.records[0].mass);
}

#[test]
fn csv_outputs_have_stable_headers() {
    let r = simulate(&shock_1d(2.0, 32, 0.1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    r.write_series_csv(std::fs::File::create(&path).unwrap()).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,mass,momX,momY,fluxBx,fluxBy,divNorm,frontAmp,energy");
    assert_eq!(lines.count(), r.records.len());
    let mut snap = Vec::new();
    r.write_snapshot_csv(&mut snap).unwrap();
    let snap = String::from_utf8(snap).unwrap();
    assert!(snap.starts_with("i,j,x1,x2,h,v1,v2,B1,B2"));
    assert_eq!(snap.lines().count(), 33);
}

#[test]
fn solver_exposes_states() {
    let s = FvSolver::new(shock_1d(2.0, 16, 0.1)).unwrap();
    let u = s.states();
    assert_eq!(u.len(), 16);
    assert_eq!(u[0].h, 1.0);
    assert_eq!(u[15].h, 2.0);
}
