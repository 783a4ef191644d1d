//! Floating-point boundary helpers: logs of huge exact integers and
//! rationals, `log n!`, and the standard normal CDF.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::f64::consts::{LN_2, SQRT_2};

/// Bits kept in the mantissa prefix when taking logs of big integers.
const PREFIX_BITS: u64 = 62;

/// Natural log of a positive big integer.
///
/// Uses the top 62 bits as a mantissa and adds the shifted-out part as a
/// multiple of `ln 2`, so the relative error stays near machine epsilon
/// even for integers with millions of bits.
pub fn log_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= PREFIX_BITS {
        return x.to_f64().expect("small integer").ln();
    }
    let shift = bits - PREFIX_BITS;
    let head = (x >> shift).to_u64().expect("62-bit prefix") as f64;
    head.ln() + shift as f64 * LN_2
}

/// Natural log of a positive rational.
pub fn log_rational(q: &BigRational) -> f64 {
    assert!(q.is_positive(), "log of a non-positive rational");
    log_biguint(q.numer().magnitude()) - log_biguint(q.denom().magnitude())
}

/// Converts a rational to the nearest-ish `f64` without overflowing on
/// numerators and denominators that individually exceed the float range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    // Scale so the integer quotient carries ~64 significant bits.
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let quotient = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let mag = quotient.to_f64().expect("finite quotient") * 2f64.powi(-shift as i32);
    if q.is_negative() {
        -mag
    } else {
        mag
    }
}

pub fn bigint_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// `ln n!` via log-gamma.
pub fn ln_factorial(n: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}
