use bpairs_core::asymptotics::{self, comparison_sweep, Target};
use bpairs_core::calibration as cal;
use bpairs_core::contour_oracle::central_arc_estimate;
use bpairs_core::distribution::{self, asymptotic_moment_ratios, MomentInputs, Moments};
use bpairs_core::numeric::{log_biguint, rational_to_f64};
use bpairs_core::saddle_solver::{lemma1_scaled_residuals, lemma3_residuals, solve_saddle, triple_roots, Tolerance};
use bpairs_core::{Kind, RowSweep};
use num_rational::BigRational;
use num_traits::{One, Zero};

#[test]
fn m_relative_log_error_at_1000() {
    let sweep = RowSweep::run(Kind::M, 1000, &[]);
    let exact = log_biguint(sweep.sum(1000).unwrap());
    let est = asymptotics::log_m_asymptotic(1000).unwrap().log_value;
    assert!(((est - exact) / exact).abs() < 0.01);
}

#[test]
fn log_counts_and_estimates_increase() {
    let sweep = RowSweep::run(Kind::M, 200, &[]);
    let rows = comparison_sweep(Target::M, &sweep, &(2..=200).collect::<Vec<_>>()).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].log_exact > w[0].log_exact);
        assert!(w[1].log_asym > w[0].log_asym);
    }
}

#[test]
fn ratio_error_does_not_grow_from_400_to_4000() {
    let m = RowSweep::run(Kind::M, 4000, &[]);
    let n = RowSweep::run(Kind::N, 4000, &[]);
    let at = |k| asymptotics::ratio_nm_check(k, &m, &n).unwrap().scaled_error.abs();
    assert!(at(4000) < at(400) * 1.05);
    assert!(at(2000) < cal::RATIO_SCALED_ERROR);
}

#[test]
fn saddle_residuals_at_a_million() {
    let l1 = lemma1_scaled_residuals(1e6, 1).unwrap();
    assert!(l1.rho_r.abs() <= 5.0);
    let tol = Tolerance::default();
    let l3 = lemma3_residuals(&triple_roots(1e6, 1, tol).unwrap()).as_array();
    let bounds = [cal::LEMMA3_GAP01, cal::LEMMA3_GAP12, cal::LEMMA3_SECOND_DIFFERENCE, cal::LEMMA3_RECIPROCAL];
    for (v, b) in l3.iter().zip(bounds) {
        assert!(v.is_finite() && v.abs() <= b);
    }
    assert!(asymptotics::saddle_gap_check(1e6).unwrap().abs() <= cal::SADDLE_GAP);
}

#[test]
fn lemma3_residuals_grow_slowly() {
    let tol = Tolerance::default();
    let at = |n: f64| lemma3_residuals(&triple_roots(n, 0, tol).unwrap()).as_array();
    for (a, b) in at(1e3).iter().zip(at(1e6)) {
        assert!(b.abs() <= 10.0 * a.abs());
    }
}

#[test]
fn second_difference_constant_is_one_half() {
    // Leading behaviour of 2 t1 - t0 - t2 is 1/(2 n^2), approached like 1/log n.
    let tol = Tolerance::default();
    let scaled: Vec<f64> = [1e3, 1e5, 1e8]
        .iter()
        .map(|&n| triple_roots(n, 0, tol).unwrap().second_difference() * n * n)
        .collect();
    assert!(scaled.windows(2).all(|w| w[1] > w[0]));
    assert!((scaled[2] - 0.5).abs() < 0.04, "{scaled:?}");
}

#[test]
fn central_arc_agreement_improves() {
    let small = central_arc_estimate(1000).unwrap();
    let large = central_arc_estimate(100_000).unwrap();
    assert!(large.relative_gap < small.relative_gap);
    for arc in [small, large] {
        assert!(arc.relative_gap <= arc.gap_tolerance);
        assert!(arc.log_tail_abs < arc.log_central_remainder);
    }
}

#[test]
fn moment_ratios_at_3000() {
    let sweep = RowSweep::run(Kind::M, 3002, &[]);
    let moments = |n| {
        distribution::ratio_moments(Kind::M, [sweep.sum(n).unwrap(), sweep.sum(n + 1).unwrap(), sweep.sum(n + 2).unwrap()])
            .unwrap()
    };
    let (mean_ratio, var_ratio) = asymptotic_moment_ratios(3000, &moments(3000)).unwrap();
    let (lo, hi) = cal::MEAN_RATIO_WINDOW;
    assert!((lo..=hi).contains(&mean_ratio));
    let (lo, hi) = cal::VARIANCE_RATIO_WINDOW;
    for n in [20, 100, 300, 1000, 3000] {
        let (_, v) = asymptotic_moment_ratios(n, &moments(n)).unwrap();
        assert!(v > 0.0 && (lo..=hi).contains(&v), "{n}: {v}");
    }
    assert!((lo..=hi).contains(&var_ratio));

    // mean * log n / n drifts away from 1 between 100 and 3000; against the
    // saddle scale n / (2 r) the mean does converge on this range.
    let normalized = |n: usize, m: &Moments| {
        let r = solve_saddle(n as f64, 1, Tolerance::default()).unwrap().r;
        rational_to_f64(&m.mean) * 2.0 * r / n as f64
    };
    let d100 = (normalized(100, &moments(100)) - 1.0).abs();
    let d3000 = (normalized(3000, &moments(3000)) - 1.0).abs();
    assert!(d3000 < d100, "{d100} {d3000}");
}

#[test]
fn zero_block_free_moments_agree_three_ways() {
    let keep: Vec<usize> = (0..=60).collect();
    let sweep = RowSweep::run(Kind::N, 62, &keep);
    for n in keep {
        distribution::exact_moments_from(&MomentInputs::from_sweep(&sweep, n).unwrap()).unwrap();
    }
}

#[test]
fn standardized_support_is_exact() {
    let sweep = RowSweep::run(Kind::N, 152, &[150]);
    let summary = distribution::summarize(&MomentInputs::from_sweep(&sweep, 150).unwrap()).unwrap();
    let (first, second) = distribution::standardized_moments(&summary);
    assert!(first.is_zero());
    assert!(second.is_one());
    let total: BigRational = summary.pmf().into_iter().sum();
    assert!(total.is_one());
}
