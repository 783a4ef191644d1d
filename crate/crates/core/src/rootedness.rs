//! Exact real-rootedness certificates via Sturm sequences.
//!
//! Sturm chains are built with primitive pseudo-remainders over the
//! integers, with signs adjusted so each element is a positive multiple of
//! the classical `-rem(p_{k-1}, p_k)`. Sign variations are evaluated at
//! rational points by homogeneous Horner evaluation, so nothing here
//! touches floating point.

use crate::distribution::variance_divergence_check;
use crate::error::{Error, Result};
use crate::exact_enum::{build_triangle, Kind, RowPolynomial};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;

/// Dense integer polynomial, coefficient of `x^i` at index `i`, with no
/// trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the positive content.
    fn primitive(self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self;
        }
        Self::new(self.coeffs.into_iter().map(|c| c / &g).collect())
    }

    /// Strips `x^m`, returning `m` and the cofactor.
    fn split_power_of_x(&self) -> (usize, Self) {
        let m = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (m, Self::new(self.coeffs[m..].to_vec()))
    }

    /// `(r, s)` with `lc(b)^s * a = q * b + r`.
    fn pseudo_remainder(&self, b: &Self) -> (Self, u32) {
        let mut r = self.coeffs.clone();
        let db = b.degree();
        let lb = b.leading();
        let mut steps = 0;
        while r.len() > db && !r.is_empty() {
            let lr = r.last().expect("nonempty").clone();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[i + shift] -= &lr * bc;
            }
            steps += 1;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Self::new(r), steps)
    }

    /// Sign of the value at `x`.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        // sum a_i p^i q^(d-i) has the sign of P(p/q) since q > 0.
        let (p, q) = (x.numer(), x.denom());
        let d = self.degree();
        let mut q_pow = Vec::with_capacity(d + 1);
        q_pow.push(BigInt::one());
        for i in 1..=d {
            let next = &q_pow[i - 1] * q;
            q_pow.push(next);
        }
        let mut v = self.leading().clone();
        for i in (0..d).rev() {
            v = v * p + &self.coeffs[i] * &q_pow[d - i];
        }
        v.sign().into_ordering()
    }

    /// Sign as `x -> +inf` or `x -> -inf`.
    fn sign_at_infinity(&self, positive: bool) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let s = self.leading().sign().into_ordering();
        if !positive && self.degree() % 2 == 1 {
            s.reverse()
        } else {
            s
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }
}

impl From<&RowPolynomial> for IntPoly {
    fn from(p: &RowPolynomial) -> Self {
        Self::new(p.coefficients.clone())
    }
}

trait IntoOrdering {
    fn into_ordering(self) -> Ordering;
}

impl IntoOrdering for Sign {
    fn into_ordering(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Interval endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    NegInfinity,
    Finite(BigRational),
    PosInfinity,
}

/// The half-open interval `(lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl RootInterval {
    pub fn whole_line() -> Self {
        Self { lo: Endpoint::NegInfinity, hi: Endpoint::PosInfinity }
    }

    pub fn nonpositive() -> Self {
        Self { lo: Endpoint::NegInfinity, hi: Endpoint::Finite(BigRational::zero()) }
    }

    pub fn finite(lo: BigRational, hi: BigRational) -> Self {
        Self { lo: Endpoint::Finite(lo), hi: Endpoint::Finite(hi) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut chain = vec![p.clone().primitive()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d.primitive());
        }
        while chain.len() >= 2 {
            let (a, b) = (&chain[chain.len() - 2], &chain[chain.len() - 1]);
            if b.degree() == 0 {
                break;
            }
            let (r, steps) = a.pseudo_remainder(b);
            if r.is_zero() {
                break;
            }
            // prem = lc(b)^steps * rem; the next element is -rem up to a
            // positive factor.
            let flip = b.leading().is_negative() && steps % 2 == 1;
            let next = if flip { r } else { Self::negate(r) };
            chain.push(next.primitive());
        }
        Ok(Self { chain })
    }

    fn negate(p: IntPoly) -> IntPoly {
        IntPoly::new(p.coeffs.into_iter().map(|c| -c).collect())
    }

    pub fn polys(&self) -> &[IntPoly] {
        &self.chain
    }

    /// True when the last element, `gcd(p, p')` up to a constant, has
    /// degree zero.
    pub fn squarefree(&self) -> bool {
        self.chain.last().is_some_and(|g| g.degree() == 0)
    }

    fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs.filter(|s| *s != Ordering::Equal) {
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Endpoint) -> usize {
        match x {
            Endpoint::NegInfinity => Self::variations(self.chain.iter().map(|p| p.sign_at_infinity(false))),
            Endpoint::PosInfinity => Self::variations(self.chain.iter().map(|p| p.sign_at_infinity(true))),
            Endpoint::Finite(v) => Self::variations(self.chain.iter().map(|p| p.sign_at(v))),
        }
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, interval: &RootInterval) -> usize {
        self.variations_at(&interval.lo).saturating_sub(self.variations_at(&interval.hi))
    }

    fn count_finite(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.count(&RootInterval::finite(lo.clone(), hi.clone()))
    }

    /// Splits `(lo, hi]` until every piece holds exactly one root.
    fn isolate(&self, lo: BigRational, hi: BigRational, roots: usize, out: &mut Vec<(BigRational, BigRational)>) {
        match roots {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
                let left = self.count_finite(&lo, &mid);
                self.isolate(lo, mid.clone(), left, out);
                self.isolate(mid, hi, roots - left, out);
            }
        }
    }

    /// Bisects an isolating interval `(lo, hi]` down to width `<= width`.
    pub fn refine(&self, mut lo: BigRational, mut hi: BigRational, width: &BigRational) -> (BigRational, BigRational) {
        debug_assert_eq!(self.count_finite(&lo, &hi), 1);
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            if self.count_finite(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }
}

/// Distinct real roots of `poly` in the half-open interval.
pub fn sturm_real_root_count(poly: &IntPoly, interval: &RootInterval) -> Result<usize> {
    Ok(SturmChain::new(poly)?.count(interval))
}

/// `2^k` with `2^k >= 1 + max_{i<d} |a_i| / |a_d|`.
fn cauchy_exponent(p: &IntPoly) -> u64 {
    let lead = p.leading().magnitude();
    let max = p.coeffs[..p.degree()].iter().map(BigInt::magnitude).max().cloned().unwrap_or_default();
    let bound = BigUint::one() + max.div_ceil(lead);
    bound.bits()
}

/// `2^-k` with `2^-k < |a_0| / (|a_0| + max_{i>0} |a_i|)`, a lower bound on
/// the magnitude of every root when `a_0 != 0`.
fn inner_exponent(p: &IntPoly) -> u64 {
    let a0 = p.coeffs[0].magnitude();
    let max = p.coeffs[1..].iter().map(BigInt::magnitude).max().cloned().unwrap_or_default();
    (a0 + max).div_ceil(a0).bits()
}

fn dyadic(exponent: i64) -> BigRational {
    let one = BigInt::one();
    if exponent >= 0 {
        BigRational::from_integer(one << exponent as u64)
    } else {
        BigRational::new(one.clone(), one << (-exponent) as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmCertificate {
    pub n: usize,
    pub kind: Kind,
    pub distinct_real_root_count: usize,
    pub squarefree: bool,
    pub roots_nonpositive: bool,
    /// Disjoint `(lo, hi]` intervals in increasing order, one root each.
    pub interval_isolations: Vec<(BigRational, BigRational)>,
}

impl SturmCertificate {
    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            n: usize,
            kind: &'a str,
            distinct_real_root_count: usize,
            squarefree: bool,
            roots_nonpositive: bool,
            interval_isolations: Vec<[String; 2]>,
        }
        Ok(serde_json::to_string(&Out {
            n: self.n,
            kind: self.kind.as_str(),
            distinct_real_root_count: self.distinct_real_root_count,
            squarefree: self.squarefree,
            roots_nonpositive: self.roots_nonpositive,
            interval_isolations: self
                .interval_isolations
                .iter()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect(),
        })?)
    }
}

/// Counts, locates and isolates the real roots of a polynomial whose roots
/// are expected in `(-inf, 0]`. A factor `x^m` is split off first and
/// contributes the single root `0`.
pub fn certify_polynomial(n: usize, kind: Kind, poly: &IntPoly) -> Result<SturmCertificate> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (zero_mult, cofactor) = poly.split_power_of_x();
    let chain = SturmChain::new(&cofactor)?;
    let total = chain.count(&RootInterval::whole_line());
    let nonpositive = chain.count(&RootInterval::nonpositive());

    let mut intervals = Vec::new();
    let mut inner_edge = BigRational::zero();
    if cofactor.degree() > 0 {
        let outer = cauchy_exponent(&cofactor) as i64;
        let inner = inner_exponent(&cofactor) as i64;
        // Scan the dyadic shells (-2^e, -2^(e-1)] from the Cauchy bound
        // inwards, then split any shell holding several roots.
        let mut points: Vec<BigRational> = (-inner..=outer).rev().map(|e| -dyadic(e)).collect();
        points.push(BigRational::zero());
        let vars: Vec<usize> = points.iter().map(|x| chain.variations_at(&Endpoint::Finite(x.clone()))).collect();
        for (w, v) in points.windows(2).zip(vars.windows(2)) {
            let roots = v[0].saturating_sub(v[1]);
            chain.isolate(w[0].clone(), w[1].clone(), roots, &mut intervals);
        }
        inner_edge = -dyadic(-inner);
    }
    if zero_mult > 0 {
        // The cofactor has no roots in (-2^-inner, 0].
        let lo = if cofactor.degree() > 0 { inner_edge } else { BigRational::from_integer(BigInt::from(-1)) };
        intervals.push((lo, BigRational::zero()));
    }

    let zero_root = usize::from(zero_mult > 0);
    Ok(SturmCertificate {
        n,
        kind,
        distinct_real_root_count: total + zero_root,
        squarefree: chain.squarefree() && zero_mult <= 1,
        roots_nonpositive: nonpositive == total,
        interval_isolations: intervals,
    })
}

fn check_certificate(cert: SturmCertificate, degree: usize) -> Result<SturmCertificate> {
    let fail = |detail: String| Error::CertificationFailed { n: cert.n, kind: cert.kind.to_string(), detail };
    if cert.distinct_real_root_count != degree {
        return Err(fail(format!("{} distinct real roots, expected {degree}", cert.distinct_real_root_count)));
    }
    if !cert.squarefree {
        return Err(fail("repeated root".into()));
    }
    if !cert.roots_nonpositive {
        return Err(fail("positive root".into()));
    }
    if cert.interval_isolations.len() != degree {
        return Err(fail(format!("{} isolating intervals", cert.interval_isolations.len())));
    }
    Ok(cert)
}

/// Certifies that row `n` of the `M` or `N` triangle, as a polynomial, has
/// `n` distinct real roots in `(-inf, 0]`.
pub fn certify_row(n: usize, kind: Kind) -> Result<SturmCertificate> {
    let triangle = build_triangle(kind, n);
    let poly = IntPoly::from(&triangle.row_polynomial(n)?);
    check_certificate(certify_polynomial(n, kind, &poly)?, n)
}

/// Certifies each listed row, building the triangle once.
pub fn certify_rows(ns: &[usize], kind: Kind) -> Vec<Result<SturmCertificate>> {
    let Some(&max) = ns.iter().max() else { return Vec::new() };
    let triangle = build_triangle(kind, max);
    let one = |n: usize| -> Result<SturmCertificate> {
        let poly = IntPoly::from(&triangle.row_polynomial(n)?);
        check_certificate(certify_polynomial(n, kind, &poly)?, n)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ns.par_iter().map(|&n| one(n)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ns.iter().map(|&n| one(n)).collect()
    }
}

/// Both hypotheses of Harper's criterion on the tested range: every row
/// polynomial is certified real-rooted with distinct roots, and the
/// variance diverges along `n_list`.
pub fn harper_hypotheses(n_list: &[usize], kind: Kind) -> Result<bool> {
    let rooted = certify_rows(n_list, kind).into_iter().all(|c| c.is_ok());
    Ok(rooted && variance_divergence_check(n_list, kind)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn m3_has_three_nonpositive_roots() {
        let p = IntPoly::from_i64(&[1, 13, 9, 1]);
        assert_eq!(sturm_real_root_count(&p, &RootInterval::nonpositive()).unwrap(), 3);
    }

    #[test]
    fn no_real_roots() {
        let p = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(sturm_real_root_count(&p, &RootInterval::whole_line()).unwrap(), 0);
    }

    #[test]
    fn n2_roots_include_zero() {
        let p = IntPoly::from_i64(&[0, 2, 1]);
        assert_eq!(sturm_real_root_count(&p, &RootInterval::nonpositive()).unwrap(), 2);
        assert_eq!(sturm_real_root_count(&p, &RootInterval::finite(q(-1, 1), q(0, 1))).unwrap(), 1);
    }

    #[test]
    fn repeated_roots_count_once() {
        // (x+1)^2 (x-3)
        let p = IntPoly::from_i64(&[-3, -5, -1, 1]);
        let chain = SturmChain::new(&p).unwrap();
        assert!(!chain.squarefree());
        assert_eq!(chain.count(&RootInterval::whole_line()), 2);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert!(matches!(sturm_real_root_count(&IntPoly::new(vec![]), &RootInterval::whole_line()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn negative_leading_coefficient() {
        // -(x-1)(x-2)(x+5)
        let p = IntPoly::from_i64(&[-10, 13, 2, -1]);
        assert_eq!(sturm_real_root_count(&p, &RootInterval::whole_line()).unwrap(), 3);
        assert_eq!(sturm_real_root_count(&p, &RootInterval::nonpositive()).unwrap(), 1);
    }

    #[test]
    fn certify_small_rows() {
        let c2 = certify_row(2, Kind::M).unwrap();
        assert_eq!(c2.distinct_real_root_count, 2);
        // -2 - sqrt(3) ~ -3.73 and -2 + sqrt(3) ~ -0.27.
        let (a, b) = &c2.interval_isolations[0];
        assert!(*a < q(-373, 100) && q(-374, 100) < *b);
        let (a, b) = &c2.interval_isolations[1];
        assert!(*a < q(-26, 100) && q(-27, 100) < *b);

        let c1 = certify_row(1, Kind::M).unwrap();
        assert_eq!(c1.distinct_real_root_count, 1);
        let p = IntPoly::from_i64(&[1, 1]);
        let chain = SturmChain::new(&p).unwrap();
        let (lo, hi) = c1.interval_isolations[0].clone();
        let (lo, hi) = chain.refine(lo, hi, &q(1, 1 << 20));
        assert!(lo < q(-1, 1) && q(-1, 1) <= hi);
        assert!(&hi - &lo <= q(1, 1 << 20));
    }

    #[test]
    fn certify_n_rows_with_zero_root() {
        let c = certify_row(3, Kind::N).unwrap();
        assert_eq!(c.distinct_real_root_count, 3);
        assert_eq!(c.interval_isolations.last().unwrap().1, q(0, 1));
        let one = certify_row(1, Kind::N).unwrap();
        assert_eq!(one.interval_isolations, vec![(q(-1, 1), q(0, 1))]);
    }

    #[test]
    fn isolating_intervals_are_disjoint_and_contain_one_root() {
        let cert = certify_row(12, Kind::M).unwrap();
        let poly = IntPoly::from(&build_triangle(Kind::M, 12).row_polynomial(12).unwrap());
        let chain = SturmChain::new(&poly).unwrap();
        for w in cert.interval_isolations.windows(2) {
            assert!(w[0].1 <= w[1].0);
        }
        for (lo, hi) in &cert.interval_isolations {
            assert!(lo < hi);
            assert_eq!(chain.count_finite(lo, hi), 1);
        }
    }

    #[test]
    fn failed_certification_is_an_error() {
        let p = IntPoly::from_i64(&[1, 0, 1]);
        let cert = certify_polynomial(2, Kind::M, &p).unwrap();
        assert!(matches!(check_certificate(cert, 2), Err(Error::CertificationFailed { .. })));
    }

    #[test]
    fn harper_examples() {
        assert!(harper_hypotheses(&[], Kind::M).unwrap());
        let ns: Vec<usize> = (1..=20).collect();
        assert!(harper_hypotheses(&ns, Kind::N).unwrap());
    }

    #[test]
    fn json_dump() {
        let json = certify_row(1, Kind::M).unwrap().to_json().unwrap();
        assert!(json.starts_with(r#"{"n":1,"kind":"M","distinct_real_root_count":1"#), "{json}");
    }
}
