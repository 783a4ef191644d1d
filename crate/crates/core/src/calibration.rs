//! Frozen bounds for checks whose error constants are not known in closed
//! form. Each bound is twice the largest value measured over the stated
//! range; the measurement is noted next to it.

/// `|residual| / n` from [`solve_saddle`](crate::saddle_solver::solve_saddle).
pub const SADDLE_RESIDUAL_PER_N: f64 = 1e-13;

/// Geometric sweep `n = 10, 100, ..., 1e8` used by the saddle checks.
pub const SADDLE_SWEEP: [f64; 8] = [1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8];

/// `|rho_r|`; measured 0.721 (n = 1e8, c = 0).
pub const LEMMA1_RHO_R: f64 = 1.5;
/// `|rho_exp|`; measured 0.813.
pub const LEMMA1_RHO_EXP: f64 = 1.7;

/// Scaled `t1 - t0` residual; measured 0.644.
pub const LEMMA3_GAP01: f64 = 1.3;
/// Scaled `t2 - t1` residual; measured 0.619.
pub const LEMMA3_GAP12: f64 = 1.25;
/// Scaled `2 t1 - t0 - t2` residual against `1/n^2`; measured 9.77 at
/// n = 1e8. The true leading constant is `1/2`, so this grows like
/// `log n / 2` and the bound only holds on the sweep.
pub const LEMMA3_SECOND_DIFFERENCE: f64 = 20.0;
/// Scaled `1/t0 + 1/t2 - 2/t1` residual; measured 3.05.
pub const LEMMA3_RECIPROCAL: f64 = 6.2;

/// `|(n (r0 - r1) - r0/2 + 1/4) log n|`; measured 0.266 over 10..1e8.
pub const SADDLE_GAP: f64 = 0.55;

/// Points of the exact-vs-asymptotic sweep.
pub const ASYMPTOTIC_SWEEP: [usize; 4] = [100, 300, 1000, 3000];
/// `|exp(delta) - 1| sqrt(n) / log^{7/2} n` for `M_n`; measured 1.14e-3 at
/// n = 100, decreasing.
pub const ASYMPTOTIC_M: f64 = 2.3e-3;
/// Same for `N_n` with the full prefactor; measured 1.76e-4 at n = 100.
pub const ASYMPTOTIC_N: f64 = 3.6e-4;
/// Allowed growth of the scaled error from one sweep point to the next.
pub const ASYMPTOTIC_GROWTH: f64 = 1.10;

/// `N_n / M_n * sqrt(2n / log n)` must lie in this window; measured 0.92.
pub const RATIO_WINDOW: (f64, f64) = (0.75, 1.25);
/// `|exact / asymptotic - 1|` for `N_n / M_n` at n = 2000; measured 0.080.
pub const RATIO_SCALED_ERROR: f64 = 0.25;

/// Kolmogorov distance to the normal law at the largest checked n;
/// measured 0.0025 at n = 2000 for both kinds.
pub const KS_MAX: f64 = 0.05;
/// Points where the Kolmogorov distance must strictly decrease.
pub const KS_SWEEP: [usize; 3] = [20, 200, 2000];

/// `mean * log n / n` at n = 3000; measured 1.178.
pub const MEAN_RATIO_WINDOW: (f64, f64) = (0.5, 2.0);
/// `variance * log^2 n / n` over 20..3000; measured 0.68 to 1.21.
pub const VARIANCE_RATIO_WINDOW: (f64, f64) = (0.3, 2.5);

/// Contour quadrature against exact `log(M_n / n!)`; measured 1.2e-14.
pub const CONTOUR_AGREEMENT: f64 = 1e-7;
/// Largest n of the contour check.
pub const CONTOUR_N_MAX: usize = 30;
/// Radius factors of the contour independence check.
pub const CONTOUR_RADIUS_FACTORS: [f64; 4] = [0.5, 0.75, 1.25, 1.5];
/// `|Im| / |Re|` of the assembled integral; measured 1.6e-11.
pub const CONTOUR_IMAG_RATIO: f64 = 1e-9;

/// Largest row certified real-rooted by default.
pub const STURM_N_MAX: usize = 50;
