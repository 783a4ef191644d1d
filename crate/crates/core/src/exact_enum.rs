//! Exact counting triangles for type-B set partitions.
//!
//! `M[n][k]` counts B_n-partitions with `k` block pairs, `N[n][k]` those
//! without a zero-block, and `S[n][k]` are the Stirling numbers of the
//! second kind. All three obey a recurrence of the form
//!
//! ```text
//! T[n][k] = T[n-1][k-1] + w(k) * T[n-1][k]
//! ```
//!
//! with `w(k) = 2k+1`, `2k` and `k` respectively, and `T[0][0] = 1`.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// All B_n-partitions.
    M,
    /// B_n-partitions without a zero-block.
    N,
    /// Ordinary set partitions by number of blocks.
    Stirling,
}

impl Kind {
    /// Multiplier applied to `T[n-1][k]` in the row recurrence.
    fn weight(self, k: usize) -> u64 {
        let k = k as u64;
        match self {
            Kind::M => 2 * k + 1,
            Kind::N => 2 * k,
            Kind::Stirling => k,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::M => "M",
            Kind::N => "N",
            Kind::Stirling => "S",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(Kind::M),
            "N" | "n" => Ok(Kind::N),
            "S" | "s" | "Stirling" | "stirling" => Ok(Kind::Stirling),
            other => Err(Error::InvalidArgument(format!("unknown kind `{other}`"))),
        }
    }
}

/// Computes row `n` from row `n-1`.
fn next_row(kind: Kind, prev: &[BigUint]) -> Vec<BigUint> {
    let n = prev.len();
    let entry = |k: usize| -> BigUint {
        let mut value = if k < n { &prev[k] * kind.weight(k) } else { BigUint::zero() };
        if k >= 1 {
            value += &prev[k - 1];
        }
        value
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        // Splitting small rows across threads costs more than it saves.
        if n >= 256 {
            return (0..=n).into_par_iter().map(entry).collect();
        }
    }
    (0..=n).map(entry).collect()
}

/// Streams the rows of a triangle one at a time, keeping only the current
/// row in memory.
#[derive(Clone, Debug)]
pub struct RowWalker {
    kind: Kind,
    n: usize,
    row: Vec<BigUint>,
}

impl RowWalker {
    /// Starts at row 0.
    pub fn new(kind: Kind) -> Self {
        Self { kind, n: 0, row: vec![BigUint::one()] }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self) -> &[BigUint] {
        &self.row
    }

    pub fn advance(&mut self) {
        self.row = next_row(self.kind, &self.row);
        self.n += 1;
    }

    pub fn into_row(self) -> Vec<BigUint> {
        self.row
    }
}

/// An immutable prefix `0..=n_max` of a counting triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTriangle {
    kind: Kind,
    rows: Vec<Vec<BigUint>>,
}

/// Builds rows `0..=n_max` of the requested triangle in exact arithmetic.
pub fn build_triangle(kind: Kind, n_max: usize) -> CountTriangle {
    let mut walker = RowWalker::new(kind);
    let mut rows = Vec::with_capacity(n_max + 1);
    rows.push(walker.row().to_vec());
    for _ in 0..n_max {
        walker.advance();
        rows.push(walker.row().to_vec());
    }
    CountTriangle { kind, rows }
}

impl CountTriangle {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> Result<&[BigUint]> {
        self.rows
            .get(n)
            .map(Vec::as_slice)
            .ok_or(Error::RowOutOfRange { n, n_max: self.n_max() })
    }

    pub fn row_sum(&self, n: usize) -> Result<SequenceValue> {
        let value = self.row(n)?.iter().sum();
        Ok(SequenceValue { n, value })
    }

    pub fn row_sums(&self) -> Vec<BigUint> {
        self.rows.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn row_polynomial(&self, n: usize) -> Result<RowPolynomial> {
        Ok(RowPolynomial::from_counts(n, self.row(n)?))
    }

    /// Writes `n,k,count` CSV with a header line.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["n", "k", "count"])?;
        for (n, row) in self.rows.iter().enumerate() {
            for (k, count) in row.iter().enumerate() {
                writer.write_record([n.to_string(), k.to_string(), count.to_string()])?;
            }
        }
        writer.flush()?;
        Ok(())
    }

    /// `{"kind":"M","rows":[[1],[1,1],...]}` with counts as bare JSON
    /// integers of arbitrary length.
    pub fn to_json(&self) -> Result<String> {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| RawValue::from_string(c.to_string()))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(serde_json::to_string(&TriangleJson { kind: self.kind, rows })?)
    }

    /// Parses the format written by [`CountTriangle::to_json`]. The rows are
    /// checked against the recurrence.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: TriangleJson = serde_json::from_str(text)?;
        let rows = parsed
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|raw| {
                        BigUint::from_str(raw.get()).map_err(|e| {
                            Error::InvalidArgument(format!("bad count `{}`: {e}", raw.get()))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Err(Error::InvalidArgument("triangle has no rows".into()));
        }
        let expected = build_triangle(parsed.kind, rows.len() - 1);
        if expected.rows != rows {
            return Err(Error::InvalidArgument(format!(
                "rows do not satisfy the {} recurrence",
                parsed.kind
            )));
        }
        Ok(expected)
    }
}

#[derive(Serialize, Deserialize)]
struct TriangleJson {
    kind: Kind,
    rows: Vec<Vec<Box<RawValue>>>,
}

/// `M_n` or `N_n`: the total number of partitions counted by a row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceValue {
    pub n: usize,
    pub value: BigUint,
}

/// Row `n` of a triangle read as a polynomial in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowPolynomial {
    pub n: usize,
    /// Coefficient of `x^i` at index `i`.
    pub coefficients: Vec<BigInt>,
}

impl RowPolynomial {
    pub fn from_counts(n: usize, counts: &[BigUint]) -> Self {
        Self { n, coefficients: counts.iter().cloned().map(BigInt::from).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }
}

/// Exact Horner evaluation at a rational point.
pub fn eval_row_polynomial(poly: &RowPolynomial, x: &BigRational) -> BigRational {
    poly.coefficients
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
}

/// Row sums for `0..=n_max` plus full copies of selected rows, computed in
/// one streaming pass. This is how large-`n` consumers avoid holding the
/// whole triangle.
#[derive(Clone, Debug)]
pub struct RowSweep {
    pub kind: Kind,
    pub sums: Vec<BigUint>,
    pub kept: BTreeMap<usize, Vec<BigUint>>,
}

impl RowSweep {
    pub fn run(kind: Kind, n_max: usize, keep: &[usize]) -> Self {
        let mut walker = RowWalker::new(kind);
        let mut sums = Vec::with_capacity(n_max + 1);
        let mut kept = BTreeMap::new();
        loop {
            let n = walker.n();
            sums.push(walker.row().iter().sum());
            if keep.contains(&n) {
                kept.insert(n, walker.row().to_vec());
            }
            if n == n_max {
                break;
            }
            walker.advance();
        }
        Self { kind, sums, kept }
    }

    pub fn n_max(&self) -> usize {
        self.sums.len() - 1
    }

    pub fn sum(&self, n: usize) -> Result<&BigUint> {
        self.sums.get(n).ok_or(Error::RowOutOfRange { n, n_max: self.n_max() })
    }

    pub fn row(&self, n: usize) -> Result<&[BigUint]> {
        self.kept
            .get(&n)
            .map(Vec::as_slice)
            .ok_or(Error::RowOutOfRange { n, n_max: self.n_max() })
    }
}

/// Outcome of an exact identity check over `0..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub first_failure: Option<usize>,
}

impl IdentityCheck {
    fn from_first_failure(first_failure: Option<usize>) -> Self {
        Self { holds: first_failure.is_none(), first_failure }
    }
}

/// Checks `M_n = sum_k C(n,k) N_k` for every `n <= n_max`.
pub fn check_binomial_identity(n_max: usize) -> IdentityCheck {
    let m = RowSweep::run(Kind::M, n_max, &[]).sums;
    let nn = RowSweep::run(Kind::N, n_max, &[]).sums;
    let mut binom = vec![BigUint::one()];
    let mut failure = None;
    for n in 0..=n_max {
        if n > 0 {
            let mut next = vec![BigUint::one(); n + 1];
            for k in 1..n {
                next[k] = &binom[k - 1] + &binom[k];
            }
            binom = next;
        }
        let rhs: BigUint = binom.iter().zip(&nn).map(|(c, v)| c * v).sum();
        if rhs != m[n] {
            failure = Some(n);
            break;
        }
    }
    IdentityCheck::from_first_failure(failure)
}

/// Checks `N[n][k] = 2^(n-k) S[n][k]` entrywise for every `n <= n_max`.
pub fn check_stirling_identity(n_max: usize) -> IdentityCheck {
    let mut nw = RowWalker::new(Kind::N);
    let mut sw = RowWalker::new(Kind::Stirling);
    for n in 0..=n_max {
        if n > 0 {
            nw.advance();
            sw.advance();
        }
        let ok = nw
            .row()
            .iter()
            .zip(sw.row())
            .enumerate()
            .all(|(k, (nk, sk))| *nk == sk << (n - k));
        if !ok {
            return IdentityCheck::from_first_failure(Some(n));
        }
    }
    IdentityCheck::from_first_failure(None)
}

/// Coefficients of `g` in `F = exp(g)`, the exponential generating function
/// of the row sums, as exact rationals (ordinary power-series coefficients).
fn egf_exponent(kind: Kind, n_max: usize) -> Vec<BigRational> {
    // M: (e^{2z}-1)/2 + z,  N: (e^{2z}-1)/2,  Stirling: e^z - 1.
    let mut g = vec![BigRational::zero(); n_max + 2];
    let mut factorial = BigInt::one();
    for (j, slot) in g.iter_mut().enumerate().skip(1) {
        factorial *= j;
        *slot = match kind {
            Kind::M | Kind::N => BigRational::new(BigInt::one() << (j - 1), factorial.clone()),
            Kind::Stirling => BigRational::new(BigInt::one(), factorial.clone()),
        };
    }
    if kind == Kind::M {
        g[1] += BigRational::one();
    }
    g
}

/// Expands the exponential generating function symbolically and returns
/// `n! [z^n] F(z)` for `n = 0..=n_max`.
///
/// The exponential is taken through `F' = g' F`, i.e.
/// `(n+1) F_{n+1} = sum_{j=0}^{n} (j+1) g_{j+1} F_{n-j}`, over exact
/// rationals.
pub fn egf_coefficients(kind: Kind, n_max: usize) -> Vec<BigUint> {
    let g = egf_exponent(kind, n_max);
    let mut f: Vec<BigRational> = Vec::with_capacity(n_max + 1);
    f.push(BigRational::one());
    for n in 0..n_max {
        let mut acc = BigRational::zero();
        for j in 0..=n {
            acc += &g[j + 1] * BigRational::from_integer(BigInt::from(j + 1)) * &f[n - j];
        }
        f.push(acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    let mut factorial = BigInt::one();
    f.into_iter()
        .enumerate()
        .map(|(n, coeff)| {
            if n > 0 {
                factorial *= n;
            }
            let scaled = coeff * BigRational::from_integer(factorial.clone());
            assert!(scaled.is_integer(), "n! [z^n] F must be an integer");
            scaled
                .to_integer()
                .to_biguint()
                .expect("generating function coefficients are nonnegative")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn m_rows_from_polynomial_displays() {
        let t = build_triangle(Kind::M, 4);
        assert_eq!(t.row(1).unwrap(), nums(&[1, 1]).as_slice());
        assert_eq!(t.row(2).unwrap(), nums(&[1, 4, 1]).as_slice());
        assert_eq!(t.row(3).unwrap(), nums(&[1, 13, 9, 1]).as_slice());
        assert_eq!(t.row(4).unwrap(), nums(&[1, 40, 58, 16, 1]).as_slice());
        assert_eq!(t.row_sum(4).unwrap().value, BigUint::from(116u32));
    }

    #[test]
    fn n_and_stirling_rows() {
        let n = build_triangle(Kind::N, 3);
        assert_eq!(n.row(0).unwrap(), nums(&[1]).as_slice());
        assert_eq!(n.row(3).unwrap(), nums(&[0, 4, 6, 1]).as_slice());
        assert_eq!(n.row_sum(3).unwrap().value, BigUint::from(11u32));
        assert_eq!(n.row_sum(2).unwrap().value, BigUint::from(3u32));
        let s = build_triangle(Kind::Stirling, 4);
        assert_eq!(s.row(4).unwrap(), nums(&[0, 1, 7, 6, 1]).as_slice());
    }

    #[test]
    fn row_sums_and_range_errors() {
        let t = build_triangle(Kind::M, 5);
        assert_eq!(t.row_sums(), nums(&[1, 2, 6, 24, 116, 648]));
        assert_eq!(t.row_sum(0).unwrap().value, BigUint::one());
        assert_eq!(t.row_sum(1).unwrap().value, BigUint::from(2u32));
        assert!(matches!(t.row_sum(6), Err(Error::RowOutOfRange { n: 6, n_max: 5 })));
    }

    #[test]
    fn boundary_conventions() {
        let m = build_triangle(Kind::M, 40);
        let n = build_triangle(Kind::N, 40);
        for i in 0..=40 {
            let mr = m.row(i).unwrap();
            assert_eq!(mr.len(), i + 1);
            assert!(mr[0].is_one() && mr[i].is_one());
            let nr = n.row(i).unwrap();
            assert!(nr[i].is_one());
            if i > 0 {
                assert!(nr[0].is_zero());
            }
        }
    }

    #[test]
    fn binomial_identity_small_and_degenerate() {
        assert_eq!(check_binomial_identity(0), IdentityCheck { holds: true, first_failure: None });
        assert!(check_binomial_identity(3).holds);
        // 24 = 1 + 3*1 + 3*3 + 1*11
        assert_eq!(1 + 3 + 3 * 3 + 11, 24);
    }

    #[test]
    fn stirling_identity_holds() {
        assert!(check_stirling_identity(60).holds);
    }

    #[test]
    fn egf_examples() {
        assert_eq!(egf_coefficients(Kind::M, 3), nums(&[1, 2, 6, 24]));
        assert_eq!(egf_coefficients(Kind::N, 0), nums(&[1]));
        assert_eq!(egf_coefficients(Kind::N, 4), nums(&[1, 1, 3, 11, 49]));
        // Bell numbers.
        assert_eq!(egf_coefficients(Kind::Stirling, 6), nums(&[1, 1, 2, 5, 15, 52, 203]));
    }

    #[test]
    fn horner_evaluation() {
        let t = build_triangle(Kind::M, 3);
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(eval_row_polynomial(&t.row_polynomial(2).unwrap(), &q(1, 1)), q(6, 1));
        assert_eq!(eval_row_polynomial(&t.row_polynomial(3).unwrap(), &q(0, 1)), q(1, 1));
        assert_eq!(eval_row_polynomial(&t.row_polynomial(1).unwrap(), &q(-1, 1)), q(0, 1));
        // M_2(-1/2) = 1 - 2 + 1/4
        assert_eq!(eval_row_polynomial(&t.row_polynomial(2).unwrap(), &q(-1, 2)), q(-3, 4));
    }

    #[test]
    fn sweep_matches_triangle() {
        let t = build_triangle(Kind::N, 30);
        let sweep = RowSweep::run(Kind::N, 30, &[7, 30]);
        assert_eq!(sweep.sums, t.row_sums());
        assert_eq!(sweep.row(7).unwrap(), t.row(7).unwrap());
        assert_eq!(sweep.row(30).unwrap(), t.row(30).unwrap());
        assert!(sweep.row(8).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        build_triangle(Kind::M, 1).write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,k,count\n0,0,1\n1,0,1\n1,1,1\n");
    }

    #[test]
    fn json_layout_and_validation() {
        let t = build_triangle(Kind::M, 2);
        assert_eq!(t.to_json().unwrap(), r#"{"kind":"M","rows":[[1],[1,1],[1,4,1]]}"#);
        assert!(CountTriangle::from_json(r#"{"kind":"M","rows":[[1],[1,2]]}"#).is_err());
    }
}
