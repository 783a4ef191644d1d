//! Positive roots of `f(r) = r (e^{2r} + c) = n` and the expansions that
//! describe them for large `n`.

use crate::error::{Error, Result};

/// Residual acceptance `|f(r) - n| <= abs + rel * n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 0.0, rel: 1e-13 }
    }
}

impl Tolerance {
    pub fn bound(&self, n: f64) -> f64 {
        self.abs + self.rel * n
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleRoot {
    pub n: f64,
    pub c: u32,
    pub r: f64,
    /// `f(r) - n` at the returned `r`.
    pub residual: f64,
    pub exp_2r: f64,
    pub two_r_plus_one: f64,
    pub iterations: usize,
}

const MAX_ITERATIONS: usize = 400;
/// Above this `n` the equation is solved as `log f(r) = log n`.
const LOG_SPACE_THRESHOLD: f64 = 1e300;

/// Either `f(r) - n` or `log f(r) - log n`, with its derivative.
#[derive(Clone, Copy)]
struct Equation {
    n: f64,
    c: f64,
    log_space: bool,
}

impl Equation {
    fn value_and_slope(&self, x: f64) -> (f64, f64) {
        if self.log_space {
            let damp = self.c * (-2.0 * x).exp();
            let g = x.ln() + 2.0 * x + damp.ln_1p() - self.n.ln();
            let slope = 1.0 / x + 2.0 - 2.0 * damp / (1.0 + damp);
            (g, slope)
        } else {
            let e = (2.0 * x).exp();
            (x * (e + self.c) - self.n, (2.0 * x + 1.0) * e + self.c)
        }
    }

    /// The residual `f(x) - n` on the original scale.
    fn residual(&self, value: f64) -> f64 {
        if self.log_space {
            self.n * value.exp_m1()
        } else {
            value
        }
    }
}

/// Solves `r (e^{2r} + c) = n` for the unique positive `r`.
///
/// Newton's method started near `log(n / log n) / 2`, safeguarded by a
/// bracket `[lo, hi]` with `f(lo) < n < f(hi)`: any step that leaves the
/// bracket or fails to shrink the residual is replaced by bisection.
pub fn solve_saddle(n: f64, c: u32, tol: Tolerance) -> Result<SaddleRoot> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Domain { what: "solve_saddle", n, min: 0.0 });
    }
    if !(tol.rel > 0.0 || tol.abs > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let eq = Equation { n, c: c as f64, log_space: n > LOG_SPACE_THRESHOLD };
    let bound = tol.bound(n);
    let accept = |value: f64| eq.residual(value).abs() <= bound;

    let guess = ((n / n.ln().max(1.0)).ln() / 2.0).max(0.1);
    let (mut lo, mut hi) = (0.0_f64, guess);
    let mut iterations = 0;
    while eq.value_and_slope(hi).0 <= 0.0 {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::SaddleNonConvergence { n, c, iterations });
        }
    }
    debug_assert!(lo == 0.0 || eq.value_and_slope(lo).0 < 0.0);

    let mut x = if guess < hi && guess > lo { guess } else { 0.5 * (lo + hi) };
    let (mut fx, mut dfx) = eq.value_and_slope(x);
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        if accept(fx) {
            return Ok(finish(n, c, x, eq.residual(fx), iterations));
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let mut candidate = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        let (mut fc, mut dfc) = eq.value_and_slope(candidate);
        if fc.abs() >= fx.abs() && candidate == newton {
            candidate = 0.5 * (lo + hi);
            (fc, dfc) = eq.value_and_slope(candidate);
        }
        if candidate == x || candidate <= lo || candidate >= hi {
            // Bracket exhausted at floating-point resolution.
            let best = [lo, hi, x]
                .into_iter()
                .filter(|&p| p > 0.0)
                .map(|p| (p, eq.value_and_slope(p).0))
                .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .expect("nonempty");
            if accept(best.1) {
                return Ok(finish(n, c, best.0, eq.residual(best.1), iterations));
            }
            break;
        }
        x = candidate;
        fx = fc;
        dfx = dfc;
    }
    Err(Error::SaddleNonConvergence { n, c, iterations })
}

fn finish(n: f64, c: u32, r: f64, residual: f64, iterations: usize) -> SaddleRoot {
    SaddleRoot { n, c, r, residual, exp_2r: (2.0 * r).exp(), two_r_plus_one: 2.0 * r + 1.0, iterations }
}

/// Residuals of the leading-order approximations `r ~ (log n)/2` and
/// `e^{2r} ~ 2n / log n`, each divided by the relative error order
/// `log log n / log n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma1Residuals {
    pub rho_r: f64,
    pub rho_exp: f64,
}

pub fn lemma1_scaled_residuals(n: f64, c: u32) -> Result<Lemma1Residuals> {
    if !(n >= 3.0) {
        return Err(Error::Domain { what: "lemma1_scaled_residuals", n, min: 3.0 });
    }
    let root = solve_saddle(n, c, Tolerance::default())?;
    let log_n = n.ln();
    let scale = log_n / log_n.ln();
    Ok(Lemma1Residuals {
        rho_r: (root.r / (log_n / 2.0) - 1.0) * scale,
        rho_exp: (root.exp_2r / (2.0 * n / log_n) - 1.0) * scale,
    })
}

/// Roots `t_i` of `f(t_i) = n + i` for `i = 0, 1, 2`.
///
/// The gaps `t_1 - t_0` and `t_2 - t_1` are of order `1/n`, and their
/// difference of order `1/n^2`, far below the resolution of `t_i` itself.
/// They are therefore solved directly from `f(t_0 + d) - f(t_0) = 1, 2`,
/// written without cancellation as
/// `t_0 e^{2t_0} expm1(2d) + d e^{2t_0} e^{2d} + c d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripleRoot {
    pub n: f64,
    pub c: u32,
    pub roots: [SaddleRoot; 3],
    pub gap01: f64,
    pub gap12: f64,
}

impl TripleRoot {
    pub fn t0(&self) -> f64 {
        self.roots[0].r
    }

    pub fn t1(&self) -> f64 {
        self.roots[1].r
    }

    pub fn t2(&self) -> f64 {
        self.roots[2].r
    }

    /// `2 t_1 - t_0 - t_2`.
    pub fn second_difference(&self) -> f64 {
        self.gap01 - self.gap12
    }

    /// `1/t_0 + 1/t_2 - 2/t_1`, from the gaps.
    pub fn reciprocal_second_difference(&self) -> f64 {
        let t0 = self.t0();
        let t1 = t0 + self.gap01;
        let t2 = t1 + self.gap12;
        self.gap01 / (t0 * t1) - self.gap12 / (t1 * t2)
    }
}

fn offset_root(t0: f64, c: u32, target: f64) -> f64 {
    let b = (2.0 * t0).exp();
    let a = t0 * b;
    let c = c as f64;
    let g = |d: f64| a * (2.0 * d).exp_m1() + b * d * (2.0 * d).exp() + c * d - target;
    let dg = |d: f64| (2.0 * a + b * (1.0 + 2.0 * d)) * (2.0 * d).exp() + c;
    let mut d = target / ((2.0 * t0 + 1.0) * b + c);
    for _ in 0..100 {
        let step = g(d) / dg(d);
        d -= step;
        if step.abs() <= 1e-17 * d.abs() {
            break;
        }
    }
    d
}

pub fn triple_roots(n: f64, c: u32, tol: Tolerance) -> Result<TripleRoot> {
    let roots = [solve_saddle(n, c, tol)?, solve_saddle(n + 1.0, c, tol)?, solve_saddle(n + 2.0, c, tol)?];
    let t0 = roots[0].r;
    let d1 = offset_root(t0, c, 1.0);
    let d2 = offset_root(t0, c, 2.0);
    Ok(TripleRoot { n, c, roots, gap01: d1, gap12: d2 - d1 })
}

/// The four gap estimates for `t_0, t_1, t_2`, each raw error divided by
/// its stated remainder order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma3Residuals {
    /// `(t1 - t0 - 1/(2n) + 1/(4 n t0)) * n log^2 n`
    pub gap01: f64,
    /// `(t2 - t1 - 1/(2n) + 1/(4 n t0)) * n log^2 n`
    pub gap12: f64,
    /// `(2 t1 - t0 - t2 - 1/n^2) * n^2 log n`
    pub second_difference: f64,
    /// `(1/t0 + 1/t2 - 2/t1) * n^2 log^2 n`
    pub reciprocal_second_difference: f64,
}

impl Lemma3Residuals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.gap01, self.gap12, self.second_difference, self.reciprocal_second_difference]
    }
}

pub fn lemma3_residuals(triple: &TripleRoot) -> Lemma3Residuals {
    let n = triple.n;
    let log_n = n.ln();
    let t0 = triple.t0();
    let gap_model = 1.0 / (2.0 * n) - 1.0 / (4.0 * n * t0);
    Lemma3Residuals {
        gap01: (triple.gap01 - gap_model) * n * log_n * log_n,
        gap12: (triple.gap12 - gap_model) * n * log_n * log_n,
        second_difference: (triple.second_difference() - 1.0 / (n * n)) * n * n * log_n,
        reciprocal_second_difference: triple.reciprocal_second_difference() * n * n * log_n * log_n,
    }
}

/// Left-hand side of the three-point divided-difference identity:
/// `h(a)/((a-b)(a-c)) + h(b)/((b-a)(b-c)) + h(c)/((c-a)(c-b))`, which
/// equals `h''(s)/2` for some `s` between the nodes.
pub fn second_divided_difference(h: impl Fn(f64) -> f64, a: f64, b: f64, c: f64) -> Result<f64> {
    if a == b || b == c || a == c {
        return Err(Error::CoincidentNodes);
    }
    Ok(h(a) / ((a - b) * (a - c)) + h(b) / ((b - a) * (b - c)) + h(c) / ((c - a) * (c - b)))
}
