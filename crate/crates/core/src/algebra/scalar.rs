//! Exact rational scalars.
//!
//! [`Scalar`] is `num_rational::BigRational`, which keeps every value reduced
//! with a positive denominator. Its `Display` already prints the canonical
//! forms `p/q`, `p`, `0`, `1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Scalar = num_rational::BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses `"p/q"`, `"-p/q"` or an integer string. Whitespace around the
/// pieces is tolerated; decimals and exponents are rejected.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(num, den))
}

pub fn factorial(n: usize) -> Scalar {
    (1..=n as i64).fold(one(), |acc, k| acc * int(k))
}

pub fn binomial(n: usize, k: usize) -> Scalar {
    if k > n {
        return zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}
