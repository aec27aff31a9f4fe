//! Arbitrary-precision rational scalars and small helpers used throughout.
//!
//! `Rational` is a reduced big-integer fraction with positive denominator and
//! a canonical zero; those invariants come with the backing implementation.

use alloc::string::String;
use alloc::string::ToString;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar: reduced fraction of arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `"p"` or `"p/q"` (optionally signed) into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| alloc::format!("invalid integer `{num}` in rational `{s}`"))?;
    let q: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| alloc::format!("invalid integer `{d}` in rational `{s}`"))?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(alloc::format!("zero denominator in rational `{s}`"));
    }
    Ok(Rational::new(p, q))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise, `q > 0`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

/// True if `r` is a non-negative integer.
pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

/// True if `r` is a positive integer.
pub fn is_positive_integer(r: &Rational) -> bool {
    r.is_integer() && r.is_positive()
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// Binomial coefficient `C(n, k)` as a rational (zero when `k > n`).
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    Rational::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

/// Falling factorial `n (n-1) ... (n-k+1)` as a rational.
pub fn falling(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
    }
    Rational::from_integer(acc)
}
