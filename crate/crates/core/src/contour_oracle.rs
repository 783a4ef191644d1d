//! Coefficient extraction by quadrature of the Cauchy integral
//!
//! ```text
//! M_n / n! = 1/(2 pi r^n sqrt(e)) * int_{-pi}^{pi} exp(A(theta)) d theta,
//! A(theta) = exp(2 r e^{i theta}) / 2 + r e^{i theta} - i n theta,
//! ```
//!
//! on a circle of radius `r` around the origin. The integrand is entire and
//! 2pi-periodic, so the trapezoidal rule converges geometrically. All sums
//! are taken on `exp(A - A(0))` to keep the astronomically large factor
//! `exp(e^{2r}/2)` out of floating point.

use crate::error::{Error, Result};
use crate::saddle_solver::{solve_saddle, Tolerance};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

pub const MIN_NODES: usize = 16;
pub const MAX_DOUBLINGS: u32 = 14;
/// Successive trapezoid sums must agree to this relative tolerance.
pub const AGREEMENT: f64 = 1e-9;
const NOISE_ULPS: f64 = 64.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    pub n: usize,
    pub radius: f64,
    /// Initial node count; doubled until the estimate settles.
    pub node_count: usize,
    /// Half-width `sqrt(2 log n / n)` of the central arc.
    pub theta0: f64,
}

impl ContourSpec {
    /// Circle through the saddle point `r (e^{2r} + 1) = n`.
    pub fn at_saddle(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain { what: "ContourSpec::at_saddle", n: 0.0, min: 1.0 });
        }
        let radius = solve_saddle(n as f64, 1, Tolerance::default())?.r;
        let nf = n as f64;
        Ok(Self { n, radius, node_count: MIN_NODES, theta0: (2.0 * nf.ln() / nf).sqrt() })
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        self.radius = radius;
        Ok(self)
    }

    pub fn with_nodes(mut self, node_count: usize) -> Result<Self> {
        if node_count < MIN_NODES || !node_count.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "node count must be a power of two >= {MIN_NODES}, got {node_count}"
            )));
        }
        self.node_count = node_count;
        Ok(self)
    }
}

/// Real and imaginary parts of `A(theta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentA {
    pub r: f64,
    pub theta: f64,
    pub real_part: f64,
    pub imag_part: f64,
}

/// `Re A = e^{2r cos t} cos(2r sin t)/2 + r cos t`,
/// `Im A = e^{2r cos t} sin(2r sin t)/2 + r sin t - n t`.
pub fn exponent_a(r: f64, theta: f64, n: usize) -> ExponentA {
    let (s, c) = theta.sin_cos();
    let big = 0.5 * (2.0 * r * c).exp();
    let (sv, cv) = (2.0 * r * s).sin_cos();
    ExponentA {
        r,
        theta,
        real_part: big * cv + r * c,
        imag_part: big * sv + r * s - n as f64 * theta,
    }
}

/// `A(0) = e^{2r}/2 + r`, the peak of `Re A` on the circle.
fn peak(r: f64) -> f64 {
    0.5 * (2.0 * r).exp() + r
}

/// `A(theta) - A(0)` without cancelling the two huge `e^{2r}/2` terms.
fn shifted_exponent(r: f64, theta: f64, n: usize) -> Complex64 {
    let (s, c) = theta.sin_cos();
    let half_sin = (0.5 * theta).sin();
    // 2r(cos t - 1), computed as -4r sin^2(t/2)
    let u = -4.0 * r * half_sin * half_sin;
    let v = 2.0 * r * s;
    let half_sin_v = (0.5 * v).sin();
    let half_e2r = 0.5 * (2.0 * r).exp();
    // e^u cos v - 1 = expm1(u) cos v - 2 sin^2(v/2)
    let re = half_e2r * (u.exp_m1() * v.cos() - 2.0 * half_sin_v * half_sin_v) + r * (c - 1.0);
    let im = half_e2r * u.exp() * v.sin() + r * s - n as f64 * theta;
    Complex64::new(re, im)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CauchyEstimate {
    pub n: usize,
    pub radius: f64,
    /// `log(M_n / n!)`.
    pub log_value: f64,
    pub nodes_used: usize,
    /// `|Im| / |Re|` of the assembled integral; zero up to rounding.
    pub imag_ratio: f64,
    /// Whether the 128-bit fallback was needed.
    pub extended_precision: bool,
}

/// Trapezoidal quadrature of the Cauchy integral with node doubling.
///
/// Runs in `f64` first. Away from the saddle circle the integral can be a
/// tiny remnant of `int |exp(A)|`; when that ratio leaves `f64` unable to
/// resolve `AGREEMENT`, the sum is redone in 128-bit floating point.
pub fn cauchy_coefficient(spec: &ContourSpec) -> Result<CauchyEstimate> {
    let spec = spec.with_nodes(spec.node_count)?.with_radius(spec.radius)?;
    let (n, r) = (spec.n, spec.radius);
    let term = |theta: f64| shifted_exponent(r, theta, n).exp();

    let mut nodes = spec.node_count;
    let h = 2.0 * PI / nodes as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for j in 0..nodes {
        let t = term(-PI + h * j as f64);
        sum += t;
        abs_sum += t.norm();
    }
    sum *= h;
    abs_sum *= h;
    for _ in 0..MAX_DOUBLINGS {
        let h = 2.0 * PI / nodes as f64;
        let mut mids = Complex64::new(0.0, 0.0);
        let mut abs_mids = 0.0;
        for j in 0..nodes {
            let t = term(-PI + h * (j as f64 + 0.5));
            mids += t;
            abs_mids += t.norm();
        }
        let next = 0.5 * sum + mids * (0.5 * h);
        abs_sum = 0.5 * abs_sum + abs_mids * (0.5 * h);
        nodes *= 2;
        let noise = NOISE_ULPS * f64::EPSILON * abs_sum;
        let settled = (next.re - sum.re).abs() <= (AGREEMENT * next.re.abs()).max(noise);
        sum = next;
        if settled {
            let extended_precision = noise > AGREEMENT * sum.re.abs();
            if extended_precision {
                let start = (nodes / 4).max(MIN_NODES);
                let (wide_sum, wide_nodes) = wide::trapezoid(n, r, start)?;
                sum = wide_sum;
                nodes = wide_nodes;
            }
            let log_value = sum.re.ln() + peak(r) - n as f64 * r.ln() - 0.5 - (2.0 * PI).ln();
            return Ok(CauchyEstimate {
                n,
                radius: r,
                log_value,
                nodes_used: nodes,
                imag_ratio: sum.im.abs() / sum.re.abs(),
                extended_precision,
            });
        }
    }
    Err(Error::QuadratureNonConvergence { n, doublings: MAX_DOUBLINGS })
}

mod wide {
    use super::{AGREEMENT, MAX_DOUBLINGS};
    use crate::error::{Error, Result};
    use astro_float::{BigFloat, Consts, Radix, RoundingMode};
    use num_complex::Complex64;

    const P: usize = 128;
    const RM: RoundingMode = RoundingMode::ToEven;

    struct Integrand {
        n: BigFloat,
        r: BigFloat,
        half_e2r: BigFloat,
        pi: BigFloat,
        one: BigFloat,
        cc: Consts,
    }

    impl Integrand {
        fn new(n: usize, r: f64) -> Result<Self> {
            let mut cc = Consts::new()
                .map_err(|e| Error::InvalidArgument(format!("extended precision unavailable: {e:?}")))?;
            let r = BigFloat::from_f64(r, P);
            let two_r = r.add(&r, P, RM);
            let half_e2r = two_r.exp(P, RM, &mut cc).div(&BigFloat::from_f64(2.0, P), P, RM);
            let pi = cc.pi(P, RM);
            Ok(Self { n: BigFloat::from_f64(n as f64, P), r, half_e2r, pi, one: BigFloat::from_f64(1.0, P), cc })
        }

        /// `exp(A(theta) - A(0))` as `(re, im)`.
        fn term(&mut self, theta: &BigFloat) -> (BigFloat, BigFloat) {
            let cc = &mut self.cc;
            let s = theta.sin(P, RM, cc);
            let c_minus_one = theta.cos(P, RM, cc).sub(&self.one, P, RM);
            let two_r = self.r.add(&self.r, P, RM);
            let v = two_r.mul(&s, P, RM);
            let eu = two_r.mul(&c_minus_one, P, RM).exp(P, RM, cc);
            let re = self
                .half_e2r
                .mul(&eu.mul(&v.cos(P, RM, cc), P, RM).sub(&self.one, P, RM), P, RM)
                .add(&self.r.mul(&c_minus_one, P, RM), P, RM);
            let im = self
                .half_e2r
                .mul(&eu.mul(&v.sin(P, RM, cc), P, RM), P, RM)
                .add(&self.r.mul(&s, P, RM), P, RM)
                .sub(&self.n.mul(theta, P, RM), P, RM);
            let mag = re.exp(P, RM, cc);
            (mag.mul(&im.cos(P, RM, cc), P, RM), mag.mul(&im.sin(P, RM, cc), P, RM))
        }

        /// `h * sum_j exp(A(theta_j) - A(0))` over `theta_j = -pi + h (j + offset)`.
        fn node_sum(&mut self, nodes: usize, offset: f64) -> (BigFloat, BigFloat) {
            let h = self.pi.add(&self.pi, P, RM).div(&BigFloat::from_f64(nodes as f64, P), P, RM);
            let mut re = BigFloat::from_f64(0.0, P);
            let mut im = BigFloat::from_f64(0.0, P);
            for j in 0..nodes {
                let step = BigFloat::from_f64(j as f64 + offset, P);
                let theta = h.mul(&step, P, RM).sub(&self.pi, P, RM);
                let (a, b) = self.term(&theta);
                re = re.add(&a, P, RM);
                im = im.add(&b, P, RM);
            }
            (re.mul(&h, P, RM), im.mul(&h, P, RM))
        }

        fn to_f64(&mut self, x: &BigFloat) -> f64 {
            x.format(Radix::Dec, RM, &mut self.cc).ok().and_then(|s| s.parse().ok()).unwrap_or(f64::NAN)
        }
    }

    /// Same doubling scheme as the `f64` path, summed in 128 bits.
    pub(super) fn trapezoid(n: usize, r: f64, start: usize) -> Result<(Complex64, usize)> {
        let mut f = Integrand::new(n, r)?;
        let half = BigFloat::from_f64(0.5, P);
        let mut nodes = start;
        let (mut re, mut im) = f.node_sum(nodes, 0.0);
        for _ in 0..MAX_DOUBLINGS {
            let (mid_re, mid_im) = f.node_sum(nodes, 0.5);
            let next_re = re.add(&mid_re, P, RM).mul(&half, P, RM);
            let next_im = im.add(&mid_im, P, RM).mul(&half, P, RM);
            nodes *= 2;
            let change = f.to_f64(&next_re.sub(&re, P, RM));
            let value = f.to_f64(&next_re);
            re = next_re;
            im = next_im;
            if change.abs() <= AGREEMENT * value.abs() {
                return Ok((Complex64::new(value, f.to_f64(&im)), nodes));
            }
        }
        Err(Error::QuadratureNonConvergence { n, doublings: MAX_DOUBLINGS })
    }
}

/// CSV row `n,log_exact,log_quadrature,delta,nodes_used`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContourComparison {
    pub n: usize,
    pub log_exact: f64,
    pub log_quadrature: f64,
    pub delta: f64,
    pub nodes_used: usize,
}

pub fn write_contour_csv<W: Write>(rows: &[ContourComparison], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Composite Simpson on `[a, b]` with interval doubling until the relative
/// change drops below `rel`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let mut intervals = 64usize;
    let eval = |m: usize| {
        let h = (b - a) / m as f64;
        let inner: f64 = (1..m).map(|i| f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
        (f(a) + f(b) + inner) * h / 3.0
    };
    let mut prev = eval(intervals);
    while intervals < 1 << 22 {
        intervals *= 2;
        let cur = eval(intervals);
        if (cur - prev).abs() <= rel * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Gaussian approximation of the central arc `|theta| <= theta0`
/// against its numerical value, and the tail arc against the central
/// remainder. All `log_*` fields are natural logs on the value scale of
/// `int exp(A) d theta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CentralArc {
    pub n: usize,
    pub radius: f64,
    pub theta0: f64,
    /// `(e^{2r} + 2r)/2 + log sqrt(2 pi / ((2r+1) n))`.
    pub log_estimate: f64,
    pub log_numeric: f64,
    /// `|numeric / estimate - 1|`.
    pub relative_gap: f64,
    /// `10 log^3 n / sqrt(n)`.
    pub gap_tolerance: f64,
    /// Log of `int_{theta0 <= |theta| <= pi} |exp(A)| d theta`, an upper
    /// bound on the tail's magnitude.
    pub log_tail_abs: f64,
    /// Log of `estimate * n r^2 theta0^3`, the central remainder scale.
    pub log_central_remainder: f64,
}

pub fn central_arc_estimate(n: usize) -> Result<CentralArc> {
    if n < 3 {
        return Err(Error::Domain { what: "central_arc_estimate", n: n as f64, min: 3.0 });
    }
    let spec = ContourSpec::at_saddle(n)?;
    let (r, theta0, nf) = (spec.radius, spec.theta0, n as f64);
    let a0 = peak(r);
    let log_estimate = a0 + 0.5 * (2.0 * PI / ((2.0 * r + 1.0) * nf)).ln();

    let central = simpson(|t| shifted_exponent(r, t, n).exp().re, 0.0, theta0, 1e-12);
    let log_numeric = (2.0 * central).ln() + a0;

    // The tail integrand underflows; integrate it relative to its maximum.
    let re_shift = |t: f64| shifted_exponent(r, t, n).re;
    let samples = 1 << 14;
    let top = (0..=samples)
        .map(|i| re_shift(theta0 + (PI - theta0) * i as f64 / samples as f64))
        .fold(f64::NEG_INFINITY, f64::max);
    let tail = simpson(|t| (re_shift(t) - top).exp(), theta0, PI, 1e-8);
    let log_tail_abs = (2.0 * tail).ln() + top + a0;

    Ok(CentralArc {
        n,
        radius: r,
        theta0,
        log_estimate,
        log_numeric,
        relative_gap: (log_numeric - log_estimate).exp_m1().abs(),
        gap_tolerance: 10.0 * nf.ln().powi(3) / nf.sqrt(),
        log_tail_abs,
        log_central_remainder: log_estimate + (nf * r * r * theta0.powi(3)).ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_enum::{Kind, RowSweep};
    use crate::numeric::{ln_factorial, log_biguint};

    #[test]
    fn exponent_at_zero() {
        let a = exponent_a(0.7, 0.0, 5);
        assert!((a.real_part - (0.5 * 1.4f64.exp() + 0.7)).abs() < 1e-15);
        assert_eq!(a.imag_part, 0.0);
    }

    #[test]
    fn exponent_at_pi() {
        let a = exponent_a(1.0, PI, 2);
        assert!((a.real_part - (0.5 * (-2f64).exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn exponent_symmetry() {
        for &t in &[0.1, 0.9, 2.5] {
            let p = exponent_a(1.3, t, 7);
            let m = exponent_a(1.3, -t, 7);
            assert_eq!(p.real_part, m.real_part);
            assert_eq!(p.imag_part, -m.imag_part);
        }
    }

    #[test]
    fn shifted_exponent_matches_direct_form() {
        let (r, n) = (1.25, 14);
        for &t in &[0.0, 0.3, 1.7, -2.9] {
            let a = exponent_a(r, t, n);
            let s = shifted_exponent(r, t, n);
            assert!((s.re - (a.real_part - peak(r))).abs() < 1e-12);
            assert!((s.im - a.imag_part).abs() < 1e-12);
        }
    }

    #[test]
    fn n1_gives_log_two() {
        let est = cauchy_coefficient(&ContourSpec::at_saddle(1).unwrap()).unwrap();
        assert!((est.log_value - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn n10_matches_exact() {
        let sweep = RowSweep::run(Kind::M, 10, &[]);
        let exact = log_biguint(sweep.sum(10).unwrap()) - ln_factorial(10);
        let est = cauchy_coefficient(&ContourSpec::at_saddle(10).unwrap()).unwrap();
        assert!(((est.log_value - exact) / exact).abs() < 1e-8);
    }

    #[test]
    fn radius_does_not_matter() {
        let spec = ContourSpec::at_saddle(30).unwrap();
        let base = cauchy_coefficient(&spec).unwrap().log_value;
        for factor in [0.9, 1.1] {
            let moved = cauchy_coefficient(&spec.with_radius(spec.radius * factor).unwrap()).unwrap();
            assert!((moved.log_value - base).abs() <= 1e-7 * base.abs());
        }
    }

    #[test]
    fn wide_circle_falls_back_to_extended_precision() {
        let spec = ContourSpec::at_saddle(30).unwrap();
        let base = cauchy_coefficient(&spec).unwrap();
        assert!(!base.extended_precision);
        let wide = cauchy_coefficient(&spec.with_radius(spec.radius * 1.5).unwrap()).unwrap();
        assert!(wide.extended_precision);
        assert!((wide.log_value - base.log_value).abs() <= 1e-7 * base.log_value.abs());
        assert!(wide.imag_ratio < 1e-9);
    }

    #[test]
    fn spec_validation() {
        let spec = ContourSpec::at_saddle(5).unwrap();
        assert!(spec.with_nodes(8).is_err());
        assert!(spec.with_nodes(48).is_err());
        assert!(spec.with_radius(-1.0).is_err());
        assert!(ContourSpec::at_saddle(0).is_err());
    }

    #[test]
    fn central_arc_at_100() {
        let arc = central_arc_estimate(100).unwrap();
        assert!(arc.relative_gap <= arc.gap_tolerance, "{arc:?}");
        assert!(arc.log_tail_abs < arc.log_central_remainder, "{arc:?}");
    }
}
