//! Exact moments of the block-pair statistic and normal-approximation
//! diagnostics.
//!
//! Mean and variance are available three ways, all in exact rationals:
//! from the pmf, from `P'(1)` and `P''(1)` of the row polynomial, and from
//! the row-sum ratios
//!
//! ```text
//! M:  E = M_{n+1}/(2 M_n) - 1,    V = M_{n+2}/(4 M_n) - M_{n+1}^2/(4 M_n^2) - 1/2
//! N:  E = N_{n+1}/(2 N_n) - 1/2,  V = N_{n+2}/(4 N_n) - N_{n+1}^2/(4 N_n^2) - 1/2
//! ```
//!
//! Both ratio forms follow from `P_{n+1}(x) = (x + b) P_n(x) + 2x P_n'(x)`
//! with `b = 1` for `M` and `b = 0` for `N`.

use crate::error::{Error, Result};
use crate::exact_enum::{Kind, RowSweep};
use crate::numeric::{log_biguint, rational_to_f64, std_normal_cdf};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::io::Write;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    pub mean: BigRational,
    pub variance: BigRational,
}

fn rat(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

fn small(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The data one `n` needs: row `n` and the row sums at `n, n+1, n+2`.
#[derive(Clone, Copy, Debug)]
pub struct MomentInputs<'a> {
    pub kind: Kind,
    pub n: usize,
    pub row: &'a [BigUint],
    pub sums: [&'a BigUint; 3],
}

impl<'a> MomentInputs<'a> {
    /// Pulls the inputs for `n` out of a sweep that kept row `n` and ran to
    /// at least `n + 2`.
    pub fn from_sweep(sweep: &'a RowSweep, n: usize) -> Result<Self> {
        Ok(Self {
            kind: sweep.kind,
            n,
            row: sweep.row(n)?,
            sums: [sweep.sum(n)?, sweep.sum(n + 1)?, sweep.sum(n + 2)?],
        })
    }
}

/// Integer power sums `(sum a_k, sum k a_k, sum k^2 a_k)`.
fn power_sums(row: &[BigUint]) -> [BigUint; 3] {
    let mut sums = [BigUint::zero(), BigUint::zero(), BigUint::zero()];
    for (k, a) in row.iter().enumerate() {
        sums[0] += a;
        sums[1] += a * k;
        sums[2] += a * (k * k);
    }
    sums
}

/// `sum k p_k` and `sum k^2 p_k - mean^2` with `p_k = a_k / sum a`.
pub fn pmf_moments(row: &[BigUint]) -> Moments {
    let [total, first, second] = power_sums(row).map(|s| rat(&s));
    let mean = first / &total;
    let variance = second / total - &mean * &mean;
    Moments { mean, variance }
}

/// `E = P'(1)/P(1)` and `V = E - E^2 + P''(1)/P(1)`.
pub fn derivative_moments(row: &[BigUint]) -> Moments {
    let total: BigUint = row.iter().sum();
    let mut d1 = BigUint::zero();
    let mut d2 = BigUint::zero();
    for (k, a) in row.iter().enumerate() {
        d1 += a * k;
        if k >= 2 {
            d2 += a * (k * (k - 1));
        }
    }
    let p1 = rat(&total);
    let mean = rat(&d1) / &p1;
    let variance = &mean - &mean * &mean + rat(&d2) / &p1;
    Moments { mean, variance }
}

/// Mean and variance from `P_n(1), P_{n+1}(1), P_{n+2}(1)` alone.
pub fn ratio_moments(kind: Kind, sums: [&BigUint; 3]) -> Result<Moments> {
    let offset = match kind {
        Kind::M => small(1, 1),
        Kind::N => small(1, 2),
        Kind::Stirling => {
            return Err(Error::InvalidArgument("ratio formulas cover kinds M and N".into()))
        }
    };
    let [s0, s1, s2] = sums.map(rat);
    let ratio = &s1 / &s0;
    let mean = &ratio / small(2, 1) - offset;
    let variance = &s2 / (&s0 * small(4, 1)) - &ratio * &ratio / small(4, 1) - small(1, 2);
    Ok(Moments { mean, variance })
}

/// Computes the moments by all three routes and insists they agree exactly.
pub fn exact_moments_from(inputs: &MomentInputs<'_>) -> Result<Moments> {
    let pmf = pmf_moments(inputs.row);
    let deriv = derivative_moments(inputs.row);
    let ratio = ratio_moments(inputs.kind, inputs.sums)?;
    let fail = |detail: String| Error::InconsistentMoments { n: inputs.n, kind: inputs.kind.to_string(), detail };
    if pmf != deriv {
        return Err(fail(format!("pmf {pmf:?} vs derivative {deriv:?}")));
    }
    if pmf != ratio {
        return Err(fail(format!("pmf {pmf:?} vs ratio {ratio:?}")));
    }
    Ok(pmf)
}

pub fn exact_moments(n: usize, kind: Kind) -> Result<Moments> {
    let sweep = RowSweep::run(kind, n + 2, &[n]);
    exact_moments_from(&MomentInputs::from_sweep(&sweep, n)?)
}

/// `(mean log n / n, variance log^2 n / n)`.
pub fn asymptotic_moment_ratios(n: usize, moments: &Moments) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::Domain { what: "asymptotic_moment_ratios", n: n as f64, min: 3.0 });
    }
    let nf = n as f64;
    let log_n = nf.ln();
    Ok((
        rational_to_f64(&moments.mean) * log_n / nf,
        rational_to_f64(&moments.variance) * log_n * log_n / nf,
    ))
}

/// Floating-point pmf of a row, accurate to a few ulps per entry.
pub fn pmf_f64(row: &[BigUint]) -> Vec<f64> {
    let log_total = log_biguint(&row.iter().sum());
    row.iter()
        .map(|a| if a.is_zero() { 0.0 } else { (log_biguint(a) - log_total).exp() })
        .collect()
}

/// `sup_k |F(k) - Phi((k + 1/2 - mean) / sd)|` over the support.
///
/// A point mass (zero variance) is reported as `1/2`, the gap between the
/// step and a normal centred on it.
pub fn kolmogorov_distance_of(pmf: &[f64], mean: f64, variance: f64) -> f64 {
    if variance <= 0.0 {
        return 0.5;
    }
    let sd = variance.sqrt();
    let mut cdf = 0.0;
    let mut sup = 0.0_f64;
    for (k, p) in pmf.iter().enumerate() {
        cdf += p;
        let normal = std_normal_cdf((k as f64 + 0.5 - mean) / sd);
        sup = sup.max((cdf - normal).abs());
    }
    sup
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistributionSummary {
    pub n: usize,
    pub kind: Kind,
    /// Row `n` of the triangle; the pmf is `counts[k] / total`.
    pub counts: Vec<BigUint>,
    pub total: BigUint,
    pub mean: BigRational,
    pub variance: BigRational,
    pub kolmogorov_distance: f64,
}

impl DistributionSummary {
    /// The exact pmf, normalized entry by entry.
    pub fn pmf(&self) -> Vec<BigRational> {
        let total = rat(&self.total);
        self.counts.iter().map(|a| rat(a) / &total).collect()
    }

    pub fn pmf_f64(&self) -> Vec<f64> {
        pmf_f64(&self.counts)
    }
}

pub fn summarize(inputs: &MomentInputs<'_>) -> Result<DistributionSummary> {
    let moments = exact_moments_from(inputs)?;
    let kolmogorov_distance = kolmogorov_distance_of(
        &pmf_f64(inputs.row),
        rational_to_f64(&moments.mean),
        rational_to_f64(&moments.variance),
    );
    Ok(DistributionSummary {
        n: inputs.n,
        kind: inputs.kind,
        counts: inputs.row.to_vec(),
        total: inputs.sums[0].clone(),
        mean: moments.mean,
        variance: moments.variance,
        kolmogorov_distance,
    })
}

pub fn kolmogorov_distance(n: usize, kind: Kind) -> Result<f64> {
    let sweep = RowSweep::run(kind, n + 2, &[n]);
    Ok(summarize(&MomentInputs::from_sweep(&sweep, n)?)?.kolmogorov_distance)
}

/// Variances at each `n` from the row-sum ratio formula.
fn variances(n_list: &[usize], kind: Kind) -> Result<Vec<BigRational>> {
    let Some(&last) = n_list.last() else { return Ok(Vec::new()) };
    let sweep = RowSweep::run(kind, last + 2, &[]);
    n_list
        .iter()
        .map(|&n| Ok(ratio_moments(kind, [sweep.sum(n)?, sweep.sum(n + 1)?, sweep.sum(n + 2)?])?.variance))
        .collect()
}

/// True iff the variance strictly increases along `n_list` and the last
/// value exceeds ten times the first. Lists shorter than two are vacuous.
pub fn variance_divergence_check(n_list: &[usize], kind: Kind) -> Result<bool> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n_list must be strictly increasing".into()));
    }
    if n_list.len() < 2 {
        return Ok(true);
    }
    let v = variances(n_list, kind)?;
    let increasing = v.windows(2).all(|w| w[0] < w[1]);
    let grown = v[v.len() - 1] > &v[0] * small(10, 1);
    Ok(increasing && grown)
}

/// CSV row `n,kind,mean,variance,mean_ratio,var_ratio,ks_distance,degenerate`;
/// exact values as `p/q`. Ratios are empty below `n = 3`; point masses have
/// `degenerate = true` and an empty KS entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub n: usize,
    pub kind: String,
    pub mean: String,
    pub variance: String,
    pub mean_ratio: Option<f64>,
    pub var_ratio: Option<f64>,
    pub ks_distance: Option<f64>,
    pub degenerate: bool,
}

impl MomentRow {
    pub fn from_summary(summary: &DistributionSummary) -> Self {
        let moments = Moments { mean: summary.mean.clone(), variance: summary.variance.clone() };
        let ratios = asymptotic_moment_ratios(summary.n, &moments).ok();
        Self {
            n: summary.n,
            kind: summary.kind.to_string(),
            mean: summary.mean.to_string(),
            variance: summary.variance.to_string(),
            mean_ratio: ratios.map(|r| r.0),
            var_ratio: ratios.map(|r| r.1),
            ks_distance: (!summary.variance.is_zero()).then_some(summary.kolmogorov_distance),
            degenerate: summary.variance.is_zero(),
        }
    }
}

pub fn write_moments_csv<W: Write>(rows: &[MomentRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PmfJson<'a> {
    n: usize,
    kind: &'a str,
    mean: f64,
    variance: f64,
    pmf: Vec<f64>,
}

/// `{"n":..,"kind":"M","mean":..,"variance":..,"pmf":[...]}` for plotting.
pub fn pmf_json(summary: &DistributionSummary) -> Result<String> {
    Ok(serde_json::to_string(&PmfJson {
        n: summary.n,
        kind: summary.kind.as_str(),
        mean: rational_to_f64(&summary.mean),
        variance: rational_to_f64(&summary.variance),
        pmf: summary.pmf_f64(),
    })?)
}

/// First two moments of the standardized variable `z = (k - mean) / sd`,
/// exactly. With `T = sum a_k` and `S = sum k a_k` they are
/// `sum a_k (kT - S) / T^2 / sd` and `sum a_k (kT - S)^2 / (T^3 variance)`;
/// the first is reported without the irrational `1/sd` factor, which does
/// not affect whether it vanishes.
pub fn standardized_moments(summary: &DistributionSummary) -> (BigRational, BigRational) {
    let total = BigInt::from(summary.total.clone());
    let s1: BigInt = summary.counts.iter().enumerate().map(|(k, a)| BigInt::from(a * k)).sum();
    let mut first = BigInt::zero();
    let mut second = BigInt::zero();
    for (k, a) in summary.counts.iter().enumerate() {
        let centred = BigInt::from(k) * &total - &s1;
        let a = BigInt::from(a.clone());
        first += &a * &centred;
        second += a * &centred * &centred;
    }
    let t2 = &total * &total;
    let first = BigRational::new(first, t2.clone());
    let second = if summary.variance.is_zero() {
        BigRational::one()
    } else {
        BigRational::new(second, t2 * &total) / &summary.variance
    };
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_1_moments() {
        let m = exact_moments(1, Kind::M).unwrap();
        assert_eq!(m.mean, small(1, 2));
        assert_eq!(m.variance, small(1, 4));
    }

    #[test]
    fn degenerate_n0() {
        let m = exact_moments(0, Kind::M).unwrap();
        assert!(m.mean.is_zero() && m.variance.is_zero());
        let nn = exact_moments(0, Kind::N).unwrap();
        assert!(nn.mean.is_zero() && nn.variance.is_zero());
        assert_eq!(kolmogorov_distance(0, Kind::M).unwrap(), 0.5);
    }

    #[test]
    fn zero_block_free_mean_at_two() {
        // Row [0, 2, 1]: mean (2 + 2)/3.
        let m = exact_moments(2, Kind::N).unwrap();
        assert_eq!(m.mean, small(4, 3));
        assert_eq!(m.variance, small(2, 9));
    }

    #[test]
    fn ratio_route_rejects_stirling() {
        let one = BigUint::one();
        assert!(ratio_moments(Kind::Stirling, [&one, &one, &one]).is_err());
    }

    #[test]
    fn inconsistent_inputs_are_reported() {
        let row = [BigUint::one(), BigUint::one()];
        let wrong = BigUint::from(7u32);
        let sums = [&BigUint::from(2u32), &BigUint::from(6u32), &wrong];
        let err = exact_moments_from(&MomentInputs { kind: Kind::M, n: 1, row: &row, sums }).unwrap_err();
        assert!(matches!(err, Error::InconsistentMoments { n: 1, .. }));
    }

    #[test]
    fn summary_is_normalized_and_standardizes() {
        let sweep = RowSweep::run(Kind::M, 14, &[12]);
        let s = summarize(&MomentInputs::from_sweep(&sweep, 12).unwrap()).unwrap();
        let total: BigRational = s.pmf().into_iter().sum();
        assert!(total.is_one());
        let (z1, z2) = standardized_moments(&s);
        assert!(z1.is_zero());
        assert!(z2.is_one());
    }

    #[test]
    fn divergence_examples() {
        assert!(variance_divergence_check(&[10, 100, 1000], Kind::M).unwrap());
        assert!(variance_divergence_check(&[10, 100, 1000], Kind::N).unwrap());
        assert!(variance_divergence_check(&[1], Kind::M).unwrap());
        assert!(variance_divergence_check(&[], Kind::M).unwrap());
        assert!(!variance_divergence_check(&[10, 11], Kind::M).unwrap());
        assert!(variance_divergence_check(&[5, 3], Kind::M).is_err());
    }

    #[test]
    fn ks_distance_shrinks() {
        let d20 = kolmogorov_distance(20, Kind::M).unwrap();
        let d200 = kolmogorov_distance(200, Kind::M).unwrap();
        assert!(d200 < d20, "{d200} vs {d20}");
    }

    #[test]
    fn moment_row_formats_rationals() {
        let sweep = RowSweep::run(Kind::M, 3, &[1]);
        let s = summarize(&MomentInputs::from_sweep(&sweep, 1).unwrap()).unwrap();
        let row = MomentRow::from_summary(&s);
        assert_eq!(row.mean, "1/2");
        assert_eq!(row.variance, "1/4");
        assert_eq!(row.mean_ratio, None);
        let mut buf = Vec::new();
        write_moments_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,kind,mean,variance,mean_ratio,var_ratio,ks_distance,degenerate\n1,M,1/2,1/4,,,"));
    }
}
