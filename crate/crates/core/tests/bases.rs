use maass_core::bases::oracle::{f_minus_three, g_minus_one, j_invariant};
use maass_core::bases::{
    duality_check, f_series, g_mock_series_default, g_series_neg, zagier_eisenstein, QSeries,
};
use maass_core::poincare::{
    evaluate, modularity_residual, CoefficientQuery, Engine, TruncationPolicy,
};
use maass_core::specfun::script_w;
use maass_core::{MaassError, Weight};
use num_complex::Complex64;
use std::f64::consts::PI;

fn policy() -> TruncationPolicy {
    TruncationPolicy::new(20_000, 1e-3)
}

#[test]
fn f_minus_three_rounds_to_oracle() {
    let engine = Engine::new(1 << 18);
    let f = f_series(&engine, -3, 8, &policy()).unwrap();
    let oracle = f_minus_three(9);
    f.series.check_plus_space().unwrap();
    assert_eq!(f.series.coeff(-3), Complex64::new(1.0, 0.0));
    assert_eq!(f.series.coeff(0), Complex64::new(0.0, 0.0));
    for n in [1, 4, 5, 8] {
        let want = oracle.coeff_i64(n).unwrap() as f64;
        let got = f.series.coeff(n).re;
        assert!((got - want).abs() < 0.1, "n = {n}: {got} vs {want}");
    }
}

#[test]
fn g_minus_one_rounds_to_oracle() {
    let engine = Engine::new(1 << 18);
    let g = g_series_neg(&engine, -1, 8, &policy()).unwrap();
    let oracle = g_minus_one(9);
    for n in [0, 3, 4, 7, 8] {
        let want = oracle.coeff_i64(n).unwrap() as f64;
        let got = g.series.coeff(n).re;
        assert!((got - want).abs() < 0.1, "n = {n}: {got} vs {want}");
    }
}

#[test]
fn square_index_has_constant_minus_two() {
    let engine = Engine::new(1 << 16);
    let g = g_series_neg(&engine, -4, 3, &TruncationPolicy::new(2048, 1e-3)).unwrap();
    assert_eq!(g.series.coeff(0).re, -2.0);
    let g = g_series_neg(&engine, -5, 3, &TruncationPolicy::new(2048, 1e-3)).unwrap();
    assert_eq!(g.series.coeff(0).re, 0.0);
}

#[test]
fn rejects_bad_indices() {
    let engine = Engine::new(1024);
    let p = TruncationPolicy::new(64, 1e-3);
    assert!(matches!(f_series(&engine, -2, 4, &p), Err(MaassError::IndexClass { .. })));
    assert!(matches!(f_series(&engine, 1, 4, &p), Err(MaassError::IndexClass { .. })));
    assert!(matches!(g_series_neg(&engine, -3, 4, &p), Err(MaassError::IndexClass { .. })));
    assert!(matches!(g_mock_series_default(&engine, 1, 4, &p), Err(MaassError::IndexClass { .. })));
}

#[test]
fn duality_small_cells() {
    let engine = Engine::new(1 << 18);
    for (big_d, d) in [(-1, -3), (-4, 0), (-5, -4)] {
        let r = duality_check(&engine, big_d, d, &policy(), 1e-2).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.a_value.re - r.a_value.re.round()).abs() < 0.1, "{r:?}");
    }
}

#[test]
fn mock_form_constant_and_shadow() {
    let engine = Engine::new(1 << 18);
    let m = g_mock_series_default(&engine, 3, 4, &policy()).unwrap();
    assert!((m.series.coeff(0).re + 16.0 * PI / 3.0).abs() < 1e-2, "{}", m.series.coeff(0));
    assert!(m.route_defect() < 1e-6);
    let shadow = m.shadow();
    let fac = 1.0 / (2.0 * (3.0 * PI).sqrt());
    let got = shadow.get(&1).copied().unwrap_or_default().re;
    assert!((got - fac * -248.0).abs() < 1e-1, "{got}");
}

#[test]
fn zagier_series_is_modular() {
    let e = zagier_eisenstein(300).unwrap();
    let f = |z: Complex64| Ok(evaluate(&e, z, 0.02)?.value);
    let z = Complex64::new(-0.31, 0.7);
    for g in [[[1, 0], [4, 1]], [[3, 1], [8, 3]], [[1, 3], [0, 1]]] {
        let r = modularity_residual(f, Weight::new(3), g, z).unwrap();
        assert!(r < 1e-9, "{g:?}: {r}");
    }
}

#[test]
fn hurwitz_pipeline_small() {
    let engine = Engine::new(1 << 16);
    let v = engine
        .coeff_b_plus(&CoefficientQuery::new(0, Weight::new(3), 4, 3, 0.75), &TruncationPolicy::new(16_384, 1e-4))
        .unwrap();
    let h = -(3.0 / PI).sqrt() / 6.0 * v.value.re;
    assert!((h - 1.0 / 3.0).abs() < 1e-2, "{h}");
}

#[test]
fn j_coefficient_from_weight_zero_series() {
    // the conj(q) coefficient of F_{1,0,1}(z, 1) is c(-1) W_{-1}(y, 1) e^{2 pi y}
    let engine = Engine::new(1 << 16);
    let v = engine
        .coeff_c(&CoefficientQuery::new(1, Weight::new(0), 1, -1, 1.0), &TruncationPolicy::fixed(4096))
        .unwrap();
    let y = 0.7;
    let w = script_w(-1, 0.0, y, 1.0).unwrap() * (2.0 * PI * y).exp();
    let want = j_invariant(3).coeff_i64(1).unwrap() as f64;
    let got = (v.value * w).norm();
    assert!((got / want - 1.0).abs() < 5e-2, "{got}");
}

#[test]
fn json_schema_round_trips_numbers() {
    let engine = Engine::new(1024);
    let f = f_series(&engine, 0, 16, &TruncationPolicy::new(64, 1e-3)).unwrap();
    let js = f.series.to_json();
    let text = serde_json::to_string(&js).unwrap();
    let back: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(back["level"], 4);
    assert_eq!(back["weight_times_2"], 1);
    assert_eq!(back["plus_space"], true);
    let coeffs = back["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 5);
    let q: QSeries = f.series.clone();
    assert_eq!(q.coeff(9).re, 2.0);
}
