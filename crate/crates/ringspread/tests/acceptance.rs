//! Acceptance suite: one test per published-value or property criterion,
//! each printing a PASS line (visible with `cargo test --test acceptance --
//! --nocapture`).

mod common;

use std::f64::consts::PI;

use ringspread::windowed_moments::{
    covariance_lz_phi_quad, mean_phi_quad, variance_phi_quad,
};
use ringspread::{
    make_cat, make_coherent, make_density_poly, make_eigenstate, make_trig, measure_b, measure_c,
    measure_kr, measure_report, measure_tilde, relation_report, trig_moments, Phase,
    QuadratureConfig, RelationId, ScanGrid, WindowEngine,
};

const TWO_PI: f64 = 2.0 * PI;

fn grid() -> ScanGrid {
    ScanGrid::default()
}

#[test]
fn criterion_01_b_measure_figure1_values() {
    let b_uniform = measure_b(&make_eigenstate(0).unwrap(), &grid()).unwrap().value;
    let b_s2 = measure_b(&make_trig(2, Phase::Sin).unwrap(), &grid()).unwrap().value;
    let b_s = measure_b(&make_trig(1, Phase::Sin).unwrap(), &grid()).unwrap().value;
    assert!((b_uniform - PI * PI / 3.0).abs() < 1e-9, "uniform: {b_uniform}");
    assert!((b_s2 - 3.16).abs() < 0.01, "psi_s2: {b_s2}");
    assert!((b_s - 2.79).abs() < 0.01, "psi_s: {b_s}");
    assert!(b_uniform > b_s2 && b_s2 > b_s);
    println!(
        "criterion 01 PASS: b(uniform)={b_uniform:.6} > b(psi_s2)={b_s2:.6} > b(psi_s)={b_s:.6}"
    );
}

#[test]
fn criterion_02_b_measure_figure2_values() {
    let b_uniform = measure_b(&make_eigenstate(0).unwrap(), &grid()).unwrap().value;
    let b_s4 = measure_b(&make_density_poly(0.2).unwrap(), &grid()).unwrap().value;
    let b_cs = measure_b(&make_coherent(0.0, 0.0).unwrap(), &grid()).unwrap().value;
    assert!((b_s4 - 2.61).abs() < 0.01, "psi_s4: {b_s4}");
    assert!((b_cs - 0.50).abs() < 0.01, "cs: {b_cs}");
    assert!(b_uniform > b_s4 && b_s4 > b_cs);
    println!("criterion 02 PASS: pi^2/3 > b(psi_s4)={b_s4:.6} > b(cs)={b_cs:.6}");
}

#[test]
fn criterion_03_kr_phi_values() {
    let (kr_s, _) = measure_kr(&make_trig(1, Phase::Sin).unwrap()).unwrap();
    assert!((kr_s - 2.0f64.ln() / 2.0).abs() < 1e-6, "psi_s: {kr_s}");
    let (kr_s2, _) = measure_kr(&make_trig(2, Phase::Sin).unwrap()).unwrap();
    assert!(kr_s2.is_infinite());
    let (kr_m, _) = measure_kr(&make_eigenstate(0).unwrap()).unwrap();
    assert!(kr_m.is_infinite());
    let (kr_s4, _) = measure_kr(&make_density_poly(0.2).unwrap()).unwrap();
    assert!((kr_s4 - 0.143).abs() < 0.001, "psi_s4: {kr_s4}");
    let (kr_cs, _) = measure_kr(&make_coherent(0.0, 0.0).unwrap()).unwrap();
    assert!((kr_cs - 0.50).abs() < 0.01, "cs: {kr_cs}");
    println!(
        "criterion 03 PASS: kr_phi = {kr_s:.6} (psi_s), inf (psi_s2), inf (uniform), \
         {kr_s4:.6} (psi_s4), {kr_cs:.6} (cs)"
    );
}

#[test]
fn criterion_04_kr_sum_equality_on_coherent_states() {
    for &(l, theta) in &[(0.0, 0.0), (0.5, 0.0), (0.0, 1.0)] {
        let state = make_coherent(l, theta).unwrap();
        let (kr_phi, kr_lz) = measure_kr(&state).unwrap();
        let sum = kr_phi + kr_lz;
        assert!(
            (sum - 1.0).abs() < 1e-4,
            "coherent({l},{theta}): kr sum = {sum}"
        );
        println!("criterion 04 PASS: kr_lz + kr_phi = {sum:.8} on coherent({l},{theta})");
    }
}

#[test]
fn criterion_05_sum_relation_near_minimized_on_cs() {
    let state = make_coherent(0.0, 0.0).unwrap();
    let engine = WindowEngine::new(&state);
    let (c, _) = measure_c(&state, &grid()).unwrap();
    let sum = engine.lz_variance() + c;
    // lower bound from the sum relation: 1 - 2*pi*p at the antipode of the
    // packet center, which sits marginally below 1 for this state
    let bound = 1.0 - 2.0 * PI * state.density(PI);
    assert!(sum >= bound - 1e-12, "sum = {sum} < bound {bound}");
    assert!((sum - 1.0).abs() < 1e-3, "sum = {sum} not near 1");
    println!("criterion 05 PASS: var(l_z) + c_measure = {sum:.6}, near-minimal (bound {bound:.6})");
}

#[test]
fn criterion_06_sin_cos_variances() {
    let cases = [
        (make_eigenstate(0).unwrap(), 0.5, 0.5),
        (make_trig(1, Phase::Cos).unwrap(), 0.75, 0.25),
        (make_trig(1, Phase::Sin).unwrap(), 0.25, 0.75),
    ];
    for (state, var_cos, var_sin) in cases {
        let t = trig_moments(&state);
        assert!((t.var_cos - var_cos).abs() < 1e-10, "{:?}", state.label());
        assert!((t.var_sin - var_sin).abs() < 1e-10, "{:?}", state.label());
    }
    println!("criterion 06 PASS: sin/cos variances (1/2,1/2), (3/4,1/4), (1/4,3/4)");
}

#[test]
fn criterion_07_tilde_degeneracy() {
    for state in [
        make_eigenstate(0).unwrap(),
        make_trig(1, Phase::Sin).unwrap(),
        make_trig(2, Phase::Sin).unwrap(),
        make_cat(0.0, 0.0).unwrap(),
    ] {
        let t = measure_tilde(&state);
        assert!((t - 1.0).abs() < 1e-10, "{:?}: tilde = {t}", state.label());
    }
    println!("criterion 07 PASS: tilde_sq = 1 on uniform, psi_s, psi_s2, cat(0,0)");
}

#[test]
fn criterion_08_variance_periodicity() {
    let corpus = common::random_corpus(50);
    let phi0s = common::random_phi0s(36, 11);
    let mut max_dev: f64 = 0.0;
    for state in &corpus {
        let engine = WindowEngine::new(state);
        for &phi0 in &phi0s {
            let d = (engine.variance_phi(phi0 + TWO_PI) - engine.variance_phi(phi0)).abs();
            max_dev = max_dev.max(d);
        }
    }
    assert!(max_dev < 1e-9, "max |D(phi0+2pi) - D(phi0)| = {max_dev:e}");
    println!("criterion 08 PASS: variance periodicity, max deviation {max_dev:.3e}");
}

#[test]
fn criterion_09_im_g_boundary_oracle() {
    let corpus = common::random_corpus(50);
    let phi0s = common::random_phi0s(36, 13);
    let mut max_dev: f64 = 0.0;
    for state in &corpus {
        let engine = WindowEngine::new(state);
        for &phi0 in &phi0s {
            let (_, im) = engine.covariance_lz_phi(phi0);
            let oracle = PI * state.density(phi0 + PI) - 0.5;
            max_dev = max_dev.max((im - oracle).abs());
        }
    }
    assert!(max_dev < 1e-8, "max |Im G - boundary oracle| = {max_dev:e}");
    println!("criterion 09 PASS: Im G boundary oracle, max deviation {max_dev:.3e}");
}

#[test]
fn criterion_10_dual_path_quadrature_oracle() {
    let cfg = QuadratureConfig::default();
    let corpus = common::random_corpus(50);
    let phi0s = common::random_phi0s(6, 17);
    let mut max_dev: f64 = 0.0;
    for state in &corpus {
        let engine = WindowEngine::new(state);
        for &phi0 in &phi0s {
            let dm = (engine.mean_phi(phi0) - mean_phi_quad(state, phi0, &cfg).unwrap()).abs();
            let dv =
                (engine.variance_phi(phi0) - variance_phi_quad(state, phi0, &cfg).unwrap()).abs();
            let (re, im) = engine.covariance_lz_phi(phi0);
            let (qre, qim) = covariance_lz_phi_quad(state, phi0, &cfg).unwrap();
            max_dev = max_dev
                .max(dm)
                .max(dv)
                .max((re - qre).abs())
                .max((im - qim).abs());
        }
    }
    assert!(max_dev < 1e-8, "max closed-form vs quadrature = {max_dev:e}");
    println!("criterion 10 PASS: dual-path agreement, max deviation {max_dev:.3e}");
}

#[test]
fn criterion_11_relations_hold_and_c_equals_b() {
    let g = grid();
    let phi0s = common::random_phi0s(12, 19);
    for state in common::random_corpus(30) {
        let engine = WindowEngine::new(&state);
        let lz_var = engine.lz_variance();
        // Eq-(9)-type pointwise check
        for &phi0 in &phi0s {
            let wm = engine.window_moments(phi0);
            let slack = wm.variance * lz_var - wm.cov_re * wm.cov_re - wm.cov_im * wm.cov_im;
            assert!(slack >= -1e-9, "windowed relation slack {slack:e}");
        }
        let rows = relation_report(&state, &g, &[]).unwrap();
        for id in [
            RelationId::SchrodingerA,
            RelationId::SchrodingerB,
            RelationId::SumA,
            RelationId::SumB,
            RelationId::SumC,
        ] {
            let row = rows.iter().find(|r| r.id == id).unwrap();
            assert!(
                row.slack >= -1e-9,
                "{} slack {:e}",
                row.id.name(),
                row.slack
            );
        }
    }
    // c-measure matches b-measure on all catalog states
    for (name, spec) in ringspread::catalog() {
        let state = spec.build(false).unwrap();
        let b = measure_b(&state, &g).unwrap();
        let (c, _) = measure_c(&state, &g).unwrap();
        assert!((c - b.value).abs() < 1e-8, "{name}: c={c} b={}", b.value);
    }
    println!("criterion 11 PASS: windowed/averaged/minimized relations hold; c = b on catalog");
}

#[test]
fn criterion_12_scan_closed_forms_via_cli() {
    let bin = env!("CARGO_BIN_EXE_ringspread");
    for (quantity, expected) in [
        ("mean", (|p: f64| p - (2.0 * p).sin() / 2.0) as fn(f64) -> f64),
        ("variance", |p: f64| {
            PI * PI / 3.0 - (2.0 * p).cos() / 2.0 - (2.0 * p).sin().powi(2) / 4.0
        }),
    ] {
        let out = std::process::Command::new(bin)
            .args(["scan", "psi_s", quantity])
            .output()
            .expect("scan runs");
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with(&format!("phi0,{quantity}")), "{header}");
        let mut rows = 0;
        for line in lines {
            let (phi0, value) = line.split_once(',').unwrap();
            let phi0: f64 = phi0.parse().unwrap();
            let value: f64 = value.parse().unwrap();
            assert!(
                (value - expected(phi0)).abs() < 1e-8,
                "{quantity} at {phi0}: {value}"
            );
            rows += 1;
        }
        assert_eq!(rows, 720);
    }
    println!("criterion 12 PASS: cmd_scan(psi_s) matches closed-form mean and variance");
}

#[test]
fn criterion_13_out_of_scope_values_documented() {
    // The 0.33 cat-state figure value (unspecified ξ) and the approximate
    // minimization in 2D-oscillator coherent states are not reproduced;
    // the cat builder itself and the relation properties stand in for them.
    let cat = make_cat(0.0, 0.0).unwrap();
    let report = measure_report(&cat, &grid()).unwrap();
    assert!(report.kr_phi.is_finite());
    println!(
        "criterion 13 PASS (exclusion): cat(0,0) builder works (kr_phi={:.4}); \
         the external-figure 0.33 value and 2D-oscillator CS are out of scope",
        report.kr_phi
    );
}
