use bpairs_core::Kind;
use bpairs_wasm::{log_count_errors, pmf_versus_normal, saddle_profile, MAX_N};

#[test]
fn pmf_curve_is_normalized() {
    let c = pmf_versus_normal(Kind::M, 40).unwrap();
    assert_eq!(c.pmf.len(), 41);
    assert!((c.pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!((c.normal.iter().sum::<f64>() - 1.0).abs() < 1e-6);
    assert!(c.ks_distance < 0.05);
}

#[test]
fn pmf_curve_rejects_out_of_range() {
    assert!(pmf_versus_normal(Kind::N, 0).is_err());
    assert!(pmf_versus_normal(Kind::N, MAX_N + 1).is_err());
}

#[test]
fn error_series_starts_at_three() {
    let rows = log_count_errors(Kind::N, 50, 1).unwrap();
    assert_eq!(rows.first().unwrap().n, 3);
    assert_eq!(rows.last().unwrap().n, 50);
    let rows = log_count_errors(Kind::M, 100, 25).unwrap();
    assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![25, 50, 75, 100]);
    assert!(log_count_errors(Kind::M, 100, 0).is_err());
}

#[test]
fn profile_peaks_at_zero_and_matches_quadratic_near_it() {
    let p = saddle_profile(500, 201).unwrap();
    assert_eq!(p.exponent[0], 0.0);
    assert!(p.exponent.iter().all(|&v| v <= 0.0));
    let near = p.theta.iter().position(|&t| t > 0.2 * p.theta0).unwrap();
    let rel = (p.exponent[near] - p.quadratic[near]).abs() / p.quadratic[near].abs();
    assert!(rel < 0.05, "{rel}");
}

#[test]
fn bindings_return_json() {
    let text = bpairs_wasm::pmf_curve("N", 5).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["kind"], "N");
    assert_eq!(v["pmf"].as_array().unwrap().len(), 6);
}
