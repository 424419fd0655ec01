//! The scalar type: arbitrary-precision rationals, always in lowest terms.
//!
//! Every quantity in this crate is a `Rational`; there is no floating point
//! anywhere, including in the file formats. Parsing accepts `p/q` and plain
//! integer strings only.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar. Stored reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}` (expected `p/q` or an integer)")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Shorthand for `n/d`. Panics on `d == 0`; intended for literals in code.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p`. Rejects anything else, in particular decimal points.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let parse_int = |t: &str| -> Result<BigInt, RationalParseError> {
        t.parse::<BigInt>()
            .map_err(|_| RationalParseError::Invalid(s.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let n = parse_int(num)?;
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(RationalParseError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Canonical text form: `p/q` when the denominator is not 1, else `p`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One half, the fixed relaxation coefficient of the Gram-Schmidt pass.
pub fn one_half() -> Rational {
    rat(1, 2)
}
