//! Small helpers over `num` big integers and rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// Renders `15`, `5/3` or `-1/2`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_integer(q: &Rational, what: &str) -> Result<BigInt> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::NonIntegral(format!("{what} = {}", fmt_rational(q))))
    }
}

pub fn to_i64(v: &BigInt, what: &str) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::Invariant(format!("{what} = {v} does not fit in i64")))
}

pub fn rational_to_i64(q: &Rational, what: &str) -> Result<i64> {
    to_i64(&to_integer(q, what)?, what)
}

/// JSON number when it fits in an `i64`, decimal string otherwise.
pub fn big_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(n) => Value::from(n),
        None => Value::from(v.to_string()),
    }
}

pub fn rational_json(q: &Rational) -> Value {
    serde_json::json!({ "num": big_json(q.numer()), "den": big_json(q.denom()) })
}

pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

pub fn is_zero(q: &Rational) -> bool {
    q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_reduced_fractions() {
        assert_eq!(fmt_rational(&rat(10, 6)), "5/3");
        assert_eq!(fmt_rational(&rat(30, 2)), "15");
        assert_eq!(fmt_rational(&rat(1, -2)), "-1/2");
    }

    #[test]
    fn integer_extraction() {
        assert_eq!(rational_to_i64(&rat(28, 1), "k").unwrap(), 28);
        assert!(matches!(
            rational_to_i64(&rat(1, 3), "k"),
            Err(Error::NonIntegral(_))
        ));
    }
}
