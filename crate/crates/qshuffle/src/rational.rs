//! Exact rational scalars and their canonical text form.
//!
//! All algebraic kernels in this crate work over arbitrary-precision
//! rationals; floating point appears only in the Monte Carlo layer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// The scalar type used throughout the exact layers.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`: expected an integer or `p/q`")]
    Malformed(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
}

/// Shorthand for small integer constants.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for small fractions, `ratio(1, 2) == 1/2`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` with optional sign, in lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |t: &str| -> Option<BigInt> { t.trim().parse::<BigInt>().ok() };
    match s.split_once('/') {
        None => parse_int(s)
            .map(Rational::from_integer)
            .ok_or_else(|| ParseRationalError::Malformed(s.to_string())),
        Some((num, den)) => {
            let num = parse_int(num).ok_or_else(|| ParseRationalError::Malformed(s.to_string()))?;
            let den = parse_int(den).ok_or_else(|| ParseRationalError::Malformed(s.to_string()))?;
            if den.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Renders in lowest terms, omitting the denominator when it is one.
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for reporting; exact kernels never round-trip floats.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// True when `r` is negative.
pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3));
        assert_eq!(parse_rational("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), ratio(-2, 3));
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn renders_lowest_terms() {
        assert_eq!(render_rational(&ratio(4, 6)), "2/3");
        assert_eq!(render_rational(&rat(-7)), "-7");
        assert_eq!(render_rational(&ratio(-1, 2)), "-1/2");
    }

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), rat(1));
        assert_eq!(factorial(1), rat(1));
        assert_eq!(factorial(5), rat(120));
    }
}
