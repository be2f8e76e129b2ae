use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{Num, One, Zero};
use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

pub const DEFAULT_PREC: u32 = 128;
pub const MIN_PREC: u32 = 53;

/// Binary floating point value of fixed precision, round-to-nearest-even.
///
/// Binary operations produce a result at the larger of the two operand
/// precisions, so constants created at low precision never degrade a
/// computation.
#[derive(Clone)]
pub struct BigFloat(Float);

impl BigFloat {
    pub fn from_float(f: Float) -> Self {
        BigFloat(f)
    }

    pub fn with_val<T>(prec: u32, v: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        BigFloat(Float::with_val(prec.max(MIN_PREC), v))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        Self::with_val(prec, v)
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        Self::with_val(prec, v)
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        Self::with_val(prec, v)
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    pub fn into_inner(self) -> Float {
        self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn round_to(&self, prec: u32) -> Self {
        Self::with_val(prec, &self.0)
    }

    pub fn is_zero_value(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    /// Exact dyadic value; `None` for NaN and infinities.
    pub fn to_rational(&self) -> Option<Rational> {
        self.0.to_rational()
    }

    /// Half a unit in the last place, as an exact rational.
    pub fn half_ulp(&self) -> Rational {
        let e = self.0.get_exp().unwrap_or(0);
        let shift = e - self.prec() as i32 - 1;
        pow2_rational(shift)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn floor_integer(&self) -> Integer {
        self.0.to_integer_round(Round::Down).map(|(i, _)| i).unwrap_or_default()
    }

    /// Parses a decimal literal at `prec` bits.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(BigFloat(Float::with_val(prec.max(MIN_PREC), parsed)))
    }

    /// Decimal rendering with `digits` significant digits (round-trip digits if `None`).
    pub fn to_decimal(&self, digits: Option<usize>) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let raw = self.0.to_string_radix(10, digits);
        tidy_exponent(&raw)
    }
}

fn pow2_rational(shift: i32) -> Rational {
    if shift >= 0 {
        Rational::from(Integer::from(1) << shift as u32)
    } else {
        Rational::from((Integer::from(1), Integer::from(1) << (-shift) as u32))
    }
}

/// Turns MPFR output such as `1.2500000e-1` into `0.125` where that is short.
fn tidy_exponent(raw: &str) -> String {
    let (mant, exp) = match raw.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (raw, 0),
    };
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mant),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{ip}{fp}");
    let point = ip.len() as i64 + exp;
    if !(-6..=30).contains(&point) {
        return raw.to_string();
    }
    let s = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
    };
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    format!("{sign}{s}")
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.to_decimal(None), self.prec())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{}", self.to_decimal(Some(p.max(1)))),
            None => write!(f, "{}", self.to_decimal(None)),
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                (&self).$m(rhs)
            }
        }
        impl<'a, 'b> $tr<&'b BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'b BigFloat) -> BigFloat {
                let p = self.prec().max(rhs.prec());
                BigFloat(Float::with_val(p, (&self.0).$m(&rhs.0)))
            }
        }
        impl $atr for BigFloat {
            fn $am(&mut self, rhs: BigFloat) {
                self.$am(&rhs)
            }
        }
        impl<'a> $atr<&'a BigFloat> for BigFloat {
            fn $am(&mut self, rhs: &'a BigFloat) {
                if rhs.prec() > self.prec() {
                    self.0.set_prec(rhs.prec());
                }
                self.0.$am(&rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);
binop!(Rem, rem, RemAssign, rem_assign);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(Float::with_val(self.prec(), -&self.0))
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat(Float::with_val(MIN_PREC, 0))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat(Float::with_val(MIN_PREC, 1))
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = Error;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self> {
        if radix != 10 {
            return Err(Error::Parse(format!("radix {radix} unsupported")));
        }
        BigFloat::parse(s, DEFAULT_PREC)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn result_takes_larger_precision() {
        let a = BigFloat::from_f64(1.0, 64);
        let b = BigFloat::from_f64(3.0, 200);
        assert_eq!((&a / &b).prec(), 200);
        assert_eq!((BigFloat::zero() + b.clone()).prec(), 200);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(BigFloat::from_f64(0.25, 128).to_decimal(None), "0.25");
        assert_eq!(BigFloat::from_f64(-3.0, 64).to_decimal(None), "-3");
        assert_eq!(BigFloat::from_f64(1e-20, 64).to_decimal(Some(3)), "1.00e-20");
    }

    #[test]
    fn half_ulp_of_one() {
        let one = BigFloat::from_f64(1.0, 128);
        // 1 has exponent 1 in MPFR's [0.5,1) convention, so ulp = 2^-127
        assert_eq!(one.half_ulp(), pow2_rational(-128));
    }
}
