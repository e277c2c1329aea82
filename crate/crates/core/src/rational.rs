//! Exact rational arithmetic for field values and comparison thresholds.
//!
//! Every field quantity in the engine is a [`Rational`]; equality is exact,
//! so triggers like `fval(fq, =, 1/2)` are stable under serialization and
//! `0.3 - 3*0.1` is exactly zero.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact fraction with positive denominator in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Reduced fraction `numer/denom`. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Rational {
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_int(n: i64) -> Rational {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// max(0, self): per-instance field contributions clamp at zero.
    pub fn clamp_non_negative(self) -> Rational {
        if self.is_negative() {
            Rational::ZERO
        } else {
            self
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse failure for rational literals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: &'static str,
}

fn parse_err(literal: &str, reason: &'static str) -> ParseRationalError {
    ParseRationalError {
        literal: literal.to_owned(),
        reason,
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p/q`, integer, and decimal literals; decimals parse exactly
    /// (`0.4` becomes `2/5`, never a float).
    fn from_str(s: &str) -> Result<Rational, ParseRationalError> {
        let text = s.trim();
        if text.is_empty() {
            return Err(parse_err(s, "empty"));
        }
        if let Some((num, den)) = text.split_once('/') {
            let n: i64 = num
                .trim()
                .parse()
                .map_err(|_| parse_err(s, "bad numerator"))?;
            let d: i64 = den
                .trim()
                .parse()
                .map_err(|_| parse_err(s, "bad denominator"))?;
            if d == 0 {
                return Err(parse_err(s, "zero denominator"));
            }
            return Ok(Rational::new(n, d));
        }
        let (sign, body) = match text.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1i64, text.strip_prefix('+').unwrap_or(text)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(parse_err(s, "no digits"));
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(parse_err(s, "non-digit character"));
        }
        let mut numer: i64 = 0;
        for b in int_part.bytes().chain(frac_part.bytes()) {
            numer = numer
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as i64))
                .ok_or_else(|| parse_err(s, "overflow"))?;
        }
        let mut denom: i64 = 1;
        for _ in 0..frac_part.len() {
            denom = denom.checked_mul(10).ok_or_else(|| parse_err(s, "overflow"))?;
        }
        Ok(Rational::new(sign * numer, denom))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Rational {
        Rational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// Shorthand used throughout tests and gadget builders.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_exactly() {
        assert_eq!("0.4".parse::<Rational>().unwrap(), rat(2, 5));
        assert_eq!("1.5".parse::<Rational>().unwrap(), rat(3, 2));
        assert_eq!("-0.25".parse::<Rational>().unwrap(), rat(-1, 4));
        assert_eq!(".5".parse::<Rational>().unwrap(), rat(1, 2));
        assert_eq!("3".parse::<Rational>().unwrap(), Rational::from_int(3));
        assert_eq!("7/14".parse::<Rational>().unwrap(), rat(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!("".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1.2.3".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!(".".parse::<Rational>().is_err());
    }

    #[test]
    fn no_floating_point_residue() {
        let point_three = "0.3".parse::<Rational>().unwrap();
        let point_one = "0.1".parse::<Rational>().unwrap();
        let three = Rational::from_int(3);
        assert_eq!(point_three - three * point_one, Rational::ZERO);
    }

    #[test]
    fn display_round_trips() {
        for r in [rat(1, 2), rat(-3, 4), Rational::from_int(5), rat(22, 7)] {
            assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        }
    }

    #[test]
    fn clamp() {
        assert_eq!(rat(-1, 2).clamp_non_negative(), Rational::ZERO);
        assert_eq!(rat(1, 2).clamp_non_negative(), rat(1, 2));
    }
}
