//! Exact rationals and square-root threshold comparisons.
//!
//! Every threshold of the form `a ± sqrt(b)` is decided by squaring, so no
//! classification ever depends on floating point rounding.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p/q"`, an integer, or a finite decimal (`"0.25"`, `"1e-2"`)
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num = BigInt::from_str(format!("{whole}{frac}").trim_start_matches('0'))
        .unwrap_or_else(|_| BigInt::zero());
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(num);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// `"p/q"` (or `"p"` for integers).
pub fn format_fraction(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with 12 significant digits.
pub fn format_decimal(r: &Rational) -> String {
    format!("{:.11e}", to_f64(r))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn pow(base: &Rational, exp: u64) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// `base^exp` for a possibly negative integer exponent.
pub fn powi(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        pow(base, exp as u64)
    } else {
        pow(base, exp.unsigned_abs()).recip()
    }
}

pub fn biguint_pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// `value < sqrt(radicand)` for `radicand >= 0`.
pub fn lt_sqrt(value: &Rational, radicand: &Rational) -> bool {
    value.is_negative() || value * value < *radicand
}

/// `value >= sqrt(radicand)` for `radicand >= 0`.
pub fn ge_sqrt(value: &Rational, radicand: &Rational) -> bool {
    !lt_sqrt(value, radicand)
}

/// `value <= sqrt(radicand)`.
pub fn le_sqrt(value: &Rational, radicand: &Rational) -> bool {
    value.is_negative() || value * value <= *radicand
}

/// `value > sqrt(radicand)`.
pub fn gt_sqrt(value: &Rational, radicand: &Rational) -> bool {
    !le_sqrt(value, radicand)
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

pub fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0.3").unwrap(), rat(3, 10));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("5e-1").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0").unwrap(), int(0));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats() {
        assert_eq!(format_fraction(&rat(2, 4)), "1/2");
        assert_eq!(format_fraction(&int(3)), "3");
        assert_eq!(format_decimal(&rat(1, 17)), "5.88235294118e-2");
    }

    #[test]
    fn sqrt_thresholds() {
        // 3 >= 4 - sqrt(2)  <=>  sqrt(2) >= 1
        assert!(!ge_sqrt(&int(1), &int(2)));
        assert!(lt_sqrt(&int(1), &int(2)));
        assert!(le_sqrt(&int(1), &int(1)));
        assert!(!lt_sqrt(&int(1), &int(1)));
        assert!(gt_sqrt(&int(2), &int(3)));
        assert!(lt_sqrt(&int(-1), &int(0)));
    }
}
