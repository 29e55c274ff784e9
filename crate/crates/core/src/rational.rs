//! Exact rational scalars and digit-exact decimal parsing.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, InputCode, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `-12`, `0.065`, `5.063e-2`, `1e3` or `3/7` without any rounding.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::input(InputCode::Malformed, format!("not a decimal number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{whole}{frac}");
    let numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(Pow::pow(&ten, scale as u64));
    } else {
        value /= Rational::from_integer(Pow::pow(&ten, (-scale) as u64));
    }
    Ok(if negative { -value } else { value })
}

/// Always `p/q`, including integers (`3/1`).
pub fn format_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators or denominators: scale down before converting.
        let n = r.numer().to_string();
        let d = r.denom().to_string();
        let shift = n.len().max(d.len()).saturating_sub(300) as u32;
        let scale = Pow::pow(&BigInt::from(10), shift);
        let n = (r.numer() / &scale).to_f64().unwrap_or(0.0);
        let d = (r.denom() / &scale).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Exact conversion of a finite `f64`.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn pow(base: &Rational, exp: i32) -> Rational {
    if exp >= 0 {
        Pow::pow(base, exp as u32)
    } else {
        Pow::pow(base.recip(), (-exp) as u32)
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_digit_exact() {
        assert_eq!(parse_rational("5.063").unwrap(), ratio(5063, 1000));
        assert_eq!(parse_rational("-0.0625").unwrap(), ratio(-1, 16));
        assert_eq!(parse_rational("10").unwrap(), int(10));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational("3/7").unwrap(), ratio(3, 7));
        assert_eq!(parse_rational("+0.94").unwrap(), ratio(47, 50));
    }

    #[test]
    fn garbage_is_rejected() {
        for s in ["", "-", "1.2.3", "abc", "1/0", "0x10", "1e", "."] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn pq_format() {
        assert_eq!(format_pq(&int(3)), "3/1");
        assert_eq!(format_pq(&ratio(-2, 4)), "-1/2");
        assert_eq!(parse_rational(&format_pq(&ratio(-7, 9))).unwrap(), ratio(-7, 9));
    }
}
