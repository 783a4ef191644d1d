//! Closed-form saddle-point estimates of `M_n` and `N_n`, evaluated in log
//! space and compared with exact counts.

use crate::error::{Error, Result};
use crate::exact_enum::RowSweep;
use crate::numeric::log_biguint;
use crate::saddle_solver::{solve_saddle, SaddleRoot, Tolerance};
use num_bigint::BigUint;
use serde::Serialize;
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    M,
    N,
    /// `N_n` with the `(2r_0+1)^{-1/2}` prefactor replaced by `(log n)^{-1/2}`.
    NSimplified,
}

/// Relative remainder order shared by both estimates.
pub const REMAINDER_ORDER: &str = "O(log^{7/2} n / sqrt(n))";

#[derive(Clone, Debug, PartialEq)]
pub struct LogScaleEstimate {
    pub n: usize,
    pub target: Target,
    /// Natural log of the estimated count.
    pub log_value: f64,
    pub remainder_order: &'static str,
    pub saddle: SaddleRoot,
}

/// `log M_n ~ -log(2r+1)/2 + 2nr - n + n/(2r) + 2r - 1` with
/// `r (e^{2r} + 1) = n`.
pub fn log_m_asymptotic(n: usize) -> Result<LogScaleEstimate> {
    if n < 2 {
        return Err(Error::Domain { what: "log_m_asymptotic", n: n as f64, min: 2.0 });
    }
    let saddle = solve_saddle(n as f64, 1, Tolerance::default())?;
    let (nf, r) = (n as f64, saddle.r);
    let log_value =
        -0.5 * saddle.two_r_plus_one.ln() + 2.0 * nf * r - nf + nf / (2.0 * r) + 2.0 * r - 1.0;
    Ok(LogScaleEstimate { n, target: Target::M, log_value, remainder_order: REMAINDER_ORDER, saddle })
}

/// `log N_n ~ -log(2r+1)/2 + 2nr - n + n/(2r) - 1/2` with `r e^{2r} = n`;
/// the simplified form uses `-log(log n)/2` for the first term.
pub fn log_n_asymptotic(n: usize, simplified: bool) -> Result<LogScaleEstimate> {
    if n < 3 {
        return Err(Error::Domain { what: "log_n_asymptotic", n: n as f64, min: 3.0 });
    }
    let saddle = solve_saddle(n as f64, 0, Tolerance::default())?;
    let (nf, r) = (n as f64, saddle.r);
    let prefactor = if simplified { -0.5 * nf.ln().ln() } else { -0.5 * saddle.two_r_plus_one.ln() };
    let log_value = prefactor + 2.0 * nf * r - nf + nf / (2.0 * r) - 0.5;
    let target = if simplified { Target::NSimplified } else { Target::N };
    Ok(LogScaleEstimate { n, target, log_value, remainder_order: REMAINDER_ORDER, saddle })
}

/// `|exp(delta) - 1| * sqrt(n) / log^{7/2} n`: the relative error of an
/// estimate measured in units of its stated remainder.
pub fn scaled_error(n: usize, delta: f64) -> f64 {
    let nf = n as f64;
    delta.exp_m1().abs() * nf.sqrt() / nf.ln().powf(3.5)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticComparison {
    pub n: usize,
    pub log_exact: f64,
    pub log_asym: f64,
    pub abs_err: f64,
    pub scaled_err: f64,
}

pub fn compare_with_exact(estimate: &LogScaleEstimate, exact: &BigUint) -> AsymptoticComparison {
    let log_exact = log_biguint(exact);
    let delta = log_exact - estimate.log_value;
    AsymptoticComparison {
        n: estimate.n,
        log_exact,
        log_asym: estimate.log_value,
        abs_err: delta.abs(),
        scaled_err: scaled_error(estimate.n, delta),
    }
}

/// Compares the estimate for `target` against exact row sums at each `n`.
pub fn comparison_sweep(target: Target, sums: &RowSweep, ns: &[usize]) -> Result<Vec<AsymptoticComparison>> {
    ns.iter()
        .map(|&n| {
            let estimate = match target {
                Target::M => log_m_asymptotic(n)?,
                Target::N => log_n_asymptotic(n, false)?,
                Target::NSimplified => log_n_asymptotic(n, true)?,
            };
            Ok(compare_with_exact(&estimate, sums.sum(n)?))
        })
        .collect()
}

/// CSV `n,log_exact,log_asym,abs_err,scaled_err`.
pub fn write_comparison_csv<W: Write>(rows: &[AsymptoticComparison], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioCheck {
    pub n: usize,
    pub exact_ratio: f64,
    pub asymptotic_ratio: f64,
    /// `exact / asymptotic - 1`.
    pub scaled_error: f64,
}

/// `N_n / M_n` against `sqrt(log n / (2n))`.
pub fn ratio_nm_check(n: usize, m: &RowSweep, nn: &RowSweep) -> Result<RatioCheck> {
    if n < 2 {
        return Err(Error::Domain { what: "ratio_nm_check", n: n as f64, min: 2.0 });
    }
    let exact_ratio = (log_biguint(nn.sum(n)?) - log_biguint(m.sum(n)?)).exp();
    let nf = n as f64;
    let asymptotic_ratio = (nf.ln() / (2.0 * nf)).sqrt();
    Ok(RatioCheck { n, exact_ratio, asymptotic_ratio, scaled_error: exact_ratio / asymptotic_ratio - 1.0 })
}

/// `(n (r_0 - r_1) - r_0/2 + 1/4) log n`, where `r_0 e^{2r_0} = n` and
/// `r_1 (e^{2r_1} + 1) = n`.
pub fn saddle_gap_check(n: f64) -> Result<f64> {
    if !(n >= 3.0) {
        return Err(Error::Domain { what: "saddle_gap_check", n, min: 3.0 });
    }
    let r0 = solve_saddle(n, 0, Tolerance::default())?.r;
    let r1 = solve_saddle(n, 1, Tolerance::default())?.r;
    Ok((n * (r0 - r1) - r0 / 2.0 + 0.25) * n.ln())
}
