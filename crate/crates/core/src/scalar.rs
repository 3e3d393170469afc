//! Exact rational coefficients.
//!
//! `Scalar` is an arbitrary-precision rational, always in lowest terms with
//! a positive denominator (the representation `num_rational` maintains).
//! Zero is `0/1`. No floating point exists anywhere in this crate.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

pub type Scalar = BigRational;

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn from_int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn from_ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Renders without a denominator when the value is an integer: `3`, `-3/2`.
pub fn format(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

pub fn is_negative(s: &Scalar) -> bool {
    s.numer().is_negative()
}

pub fn abs(s: &Scalar) -> Scalar {
    if is_negative(s) {
        -s.clone()
    } else {
        s.clone()
    }
}

/// Exact binomial coefficient as u64; enough for every count in this crate.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}
