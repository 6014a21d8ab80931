//! Exact integer and rational arithmetic.
//!
//! Every threshold comparison in this crate is exact: binomial coefficients
//! are arbitrary-precision integers and fractional constants are rationals.
//! Floating point appears nowhere in any decision.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for all threshold arithmetic.
pub type Rational = BigRational;

/// Binomial coefficient C(n, k) as an exact integer. Zero when k > n.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Rational from an integer numerator and denominator. Errors on zero
/// denominator.
pub fn ratio(num: i64, den: i64) -> Result<Rational> {
    if den == 0 {
        return Err(Error::invalid("rational with zero denominator"));
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Rational from a usize, for counts entering threshold comparisons.
pub fn rational_from(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse a rational written as `NUM/DEN` or a bare integer `NUM`.
/// Accepts an optional leading minus on the numerator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("malformed rational {s:?}, expected NUM or NUM/DEN"));
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let num: BigInt = num_s.parse().map_err(|_| bad())?;
    let den: BigInt = match den_s {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::invalid("rational with zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Render a rational as `NUM/DEN`, or `NUM` when the denominator is one.
/// This is the form used in serialized reports.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serde adapter rendering rationals as `NUM/DEN` strings in reports, so
/// serialized output is exact and stable.
pub mod serde_rational {
    use super::{format_rational, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(
        q: &Rational,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(q))
    }
}

/// As `serde_rational`, for optional fields. Pair with
/// `skip_serializing_if = "Option::is_none"`.
pub mod serde_opt_rational {
    use super::{format_rational, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(
        q: &Option<Rational>,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => serializer.serialize_str(&format_rational(q)),
            None => serializer.serialize_none(),
        }
    }
}

/// Ceiling of a non-negative rational as a usize.
pub fn ceil_to_usize(q: &Rational) -> Result<usize> {
    if q.is_negative() {
        return Err(Error::invalid("ceiling of a negative rational requested"));
    }
    q.ceil()
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::invalid("rational too large for usize"))
}

/// Floor of a non-negative rational as a usize.
pub fn floor_to_usize(q: &Rational) -> Result<usize> {
    if q.is_negative() {
        return Err(Error::invalid("floor of a negative rational requested"));
    }
    q.floor()
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::invalid("rational too large for usize"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(10, 0), BigInt::one());
        assert_eq!(binomial(10, 10), BigInt::one());
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(30, 15), BigInt::from(155_117_520u64));
    }

    #[test]
    fn parse_round_trip() {
        let q = parse_rational("3/4").unwrap();
        assert_eq!(format_rational(&q), "3/4");
        let q = parse_rational("7").unwrap();
        assert_eq!(format_rational(&q), "7");
        let q = parse_rational("-1/2").unwrap();
        assert_eq!(format_rational(&q), "-1/2");
        let q = parse_rational(" 6/8 ").unwrap();
        assert_eq!(format_rational(&q), "3/4");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn rounding() {
        let q = parse_rational("7/3").unwrap();
        assert_eq!(ceil_to_usize(&q).unwrap(), 3);
        assert_eq!(floor_to_usize(&q).unwrap(), 2);
        let q = parse_rational("4").unwrap();
        assert_eq!(ceil_to_usize(&q).unwrap(), 4);
        assert_eq!(floor_to_usize(&q).unwrap(), 4);
        assert!(ceil_to_usize(&parse_rational("-1/2").unwrap()).is_err());
    }
}
