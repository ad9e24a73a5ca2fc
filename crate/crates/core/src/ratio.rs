//! Exact rationals and their `num/den` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `"num/den"` or a bare integer. Decimal notation is rejected so that
/// every value feeding exact arithmetic is exact on entry.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(text.to_string());
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let is_int = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) || !is_int(den) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Always renders as `num/den`, including integers (`1/1`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `x^k` by repeated squaring.
pub fn pow(x: &Rational, mut k: u32) -> Rational {
    let mut base = x.clone();
    let mut acc = Rational::one();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    acc
}

pub(crate) fn in_unit_interval(x: &Rational) -> bool {
    !x.is_negative() && *x <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/3").unwrap(), rational(1, 3));
        assert_eq!(parse_rational(" 2/4 ").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("1").unwrap(), from_int(1));
        assert_eq!(parse_rational("-3/9").unwrap(), rational(-1, 3));
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        for bad in ["0.5", "1/0", "", "a/b", "1/", "/2", "1/2/3", "1e3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&rational(6, 8)), "3/4");
        assert_eq!(format_rational(&from_int(0)), "0/1");
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = rational(2, 3);
        let mut acc = from_int(1);
        for k in 0..10 {
            assert_eq!(pow(&x, k), acc);
            acc *= &x;
        }
    }
}
