use bpairs_core::saddle_solver::{second_divided_difference, solve_saddle, Tolerance};
use bpairs_core::{build_triangle, CountTriangle, Kind, RowSweep};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::M), Just(Kind::N), Just(Kind::Stirling)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip(kind in kind(), n_max in 0usize..40) {
        let t = build_triangle(kind, n_max);
        let back = CountTriangle::from_json(&t.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn sweep_agrees_with_triangle(kind in kind(), n_max in 0usize..60, pick in 0usize..60) {
        let keep = pick.min(n_max);
        let t = build_triangle(kind, n_max);
        let s = RowSweep::run(kind, n_max, &[keep]);
        prop_assert_eq!(s.row(keep).unwrap(), t.row(keep).unwrap());
        prop_assert_eq!(s.sums, t.row_sums());
    }

    #[test]
    fn m_rows_are_unit_at_both_ends(n in 0usize..80) {
        let t = build_triangle(Kind::M, n);
        let row = t.row(n).unwrap();
        prop_assert_eq!(row.len(), n + 1);
        prop_assert!(row[0] == 1u32.into() && row[n] == 1u32.into());
    }

    #[test]
    fn saddle_root_increases_with_n(n in 1.0f64..1e7, c in 0u32..2) {
        let tol = Tolerance::default();
        let a = solve_saddle(n, c, tol).unwrap();
        let b = solve_saddle(n + 1.0, c, tol).unwrap();
        prop_assert!(b.r > a.r);
        prop_assert!(a.residual.abs() <= 1e-13 * n);
    }

    #[test]
    fn divided_difference_of_quadratic_is_leading_coefficient(
        q in -5.0f64..5.0, p in -5.0f64..5.0, k in -5.0f64..5.0,
        a in -3.0f64..-1.0, b in -0.5f64..0.5, c in 1.0f64..3.0,
    ) {
        let h = |x: f64| q * x * x + p * x + k;
        let v = second_divided_difference(h, a, b, c).unwrap();
        prop_assert!((v - q).abs() < 1e-12 * (1.0 + q.abs() + p.abs() + k.abs()));
    }

    #[test]
    fn divided_difference_of_line_vanishes(p in -5.0f64..5.0, k in -5.0f64..5.0) {
        let v = second_divided_difference(|x| p * x + k, -1.0, 0.25, 2.0).unwrap();
        prop_assert!(v.abs() < 1e-12);
    }
}
