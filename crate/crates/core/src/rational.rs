//! Exact rational numbers and their textual forms.
//!
//! Values are parsed from plain decimals (`4.5`, `12`, `.25`) or integer
//! fractions (`7/8`) without any rounding, and rendered back as a decimal
//! when the expansion terminates, otherwise as `a/b`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Shorthand for `numer/denom` as an exact rational.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer as an exact rational.
pub fn qi(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses a decimal or `a/b` string exactly. Surrounding whitespace is ignored.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty numeric field".into());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_integer(num.trim()).ok_or_else(|| format!("bad numerator in {s:?}"))?;
        let d = parse_integer(den.trim()).ok_or_else(|| format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }

    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("not a number: {s:?}"));
    }
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(format!("not a number: {s:?}"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mantissa: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| format!("not a number: {s:?}"))?
    };
    let scale = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(mantissa, scale);
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Renders a rational exactly: terminating decimals as decimals, the rest as `a/b`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    let denom = value.denom().clone();
    let mut rest = denom.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while rest.is_multiple_of(&two) {
        rest /= &two;
        twos += 1;
    }
    while rest.is_multiple_of(&five) {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    let scaled = value * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    debug_assert!(scaled.is_integer());
    let digits = scaled.numer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

/// Nearest `f64`, for display and sampling only.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = value.numer().to_f64().unwrap_or(f64::NAN);
        let d = value.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

/// Dot product of two equal-length rational vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("4.5").unwrap(), q(9, 2));
        assert_eq!(parse_rational("12").unwrap(), qi(12));
        assert_eq!(parse_rational(".25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-2.50").unwrap(), q(-5, 2));
        assert_eq!(parse_rational(" 7/8 ").unwrap(), q(7, 8));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", ".", "1e5", "abc", "1/0", "1.2.3", "--1", "1/x"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn formats_terminating_and_repeating() {
        assert_eq!(format_rational(&q(9, 2)), "4.5");
        assert_eq!(format_rational(&q(1, 3)), "1/3");
        assert_eq!(format_rational(&q(1, 16)), "0.0625");
        assert_eq!(format_rational(&q(-3, 40)), "-0.075");
        assert_eq!(format_rational(&qi(12)), "12");
    }

    #[test]
    fn format_parse_round_trip() {
        for (n, d) in [(1, 3), (22, 7), (5, 8), (-1, 1024), (123456789, 1000)] {
            let v = q(n, d);
            assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
        }
    }
}
