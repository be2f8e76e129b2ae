//! Scalar abstraction shared by every evaluator.
//!
//! Everything numeric is generic over [`Real`], implemented for `f64` and
//! [`BigFloat`]. Exact inputs are converted with a target precision in bits;
//! `f64` ignores it.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_complex::Complex;
use num_traits::Num;
use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::numbers::BigFloat;

pub trait Real:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// Significand bits carried by this value.
    fn precision(&self) -> u32;
    /// Precision a freshly requested `prec` actually yields for this type.
    fn effective_precision(prec: u32) -> u32;
    fn from_f64_prec(v: f64, prec: u32) -> Self;
    fn from_integer(v: &Integer, prec: u32) -> Self;
    fn from_rational(v: &Rational, prec: u32) -> Self;
    fn from_bigfloat(v: &BigFloat) -> Self;
    fn to_bigfloat(&self) -> BigFloat;
    fn to_f64(&self) -> f64;

    fn ln(&self) -> Self;
    fn ln_1p(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn atan2(&self, other: &Self) -> Self;
    fn abs(&self) -> Self;
    fn floor(&self) -> Self;
    fn is_finite(&self) -> bool;

    fn pi(prec: u32) -> Self;
    fn euler_gamma(prec: u32) -> Self;

    /// Unit roundoff 2^-p for the precision `prec` maps to.
    fn unit_roundoff(prec: u32) -> f64 {
        (-(Self::effective_precision(prec) as f64)).exp2()
    }

    fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_integer(&Integer::from(v), prec)
    }

    fn powf(&self, e: &Self) -> Self {
        (self.ln() * e.clone()).exp()
    }

    /// Same value carried at no less than `prec` bits.
    fn with_prec(&self, prec: u32) -> Self;

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn precision(&self) -> u32 {
        53
    }
    fn effective_precision(_: u32) -> u32 {
        53
    }
    fn from_f64_prec(v: f64, _: u32) -> Self {
        v
    }
    fn from_integer(v: &Integer, _: u32) -> Self {
        v.to_f64()
    }
    fn from_rational(v: &Rational, _: u32) -> Self {
        Float::with_val(53, v).to_f64()
    }
    fn from_bigfloat(v: &BigFloat) -> Self {
        v.to_f64()
    }
    fn to_bigfloat(&self) -> BigFloat {
        BigFloat::from_f64(*self, 53)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn ln_1p(&self) -> Self {
        f64::ln_1p(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn atan2(&self, other: &Self) -> Self {
        f64::atan2(*self, *other)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn with_prec(&self, _: u32) -> Self {
        *self
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn pi(_: u32) -> Self {
        std::f64::consts::PI
    }
    fn euler_gamma(_: u32) -> Self {
        0.577_215_664_901_532_9
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
}

// rug's by-reference method names differ from the by-value ones only by a suffix
macro_rules! unary_ref {
    ($name:ident, $r:ident) => {
        fn $name(&self) -> Self {
            BigFloat::from_float(Float::with_val(self.prec(), self.inner().$r()))
        }
    };
}

impl Real for BigFloat {
    fn precision(&self) -> u32 {
        self.prec()
    }
    fn effective_precision(prec: u32) -> u32 {
        prec.max(crate::numbers::bigfloat::MIN_PREC)
    }
    fn from_f64_prec(v: f64, prec: u32) -> Self {
        BigFloat::from_f64(v, prec)
    }
    fn from_integer(v: &Integer, prec: u32) -> Self {
        BigFloat::from_integer(v, prec)
    }
    fn from_rational(v: &Rational, prec: u32) -> Self {
        BigFloat::from_rational(v, prec)
    }
    fn from_bigfloat(v: &BigFloat) -> Self {
        v.clone()
    }
    fn to_bigfloat(&self) -> BigFloat {
        self.clone()
    }
    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
    unary_ref!(ln, ln_ref);
    unary_ref!(ln_1p, ln_1p_ref);
    unary_ref!(exp, exp_ref);
    unary_ref!(sin, sin_ref);
    unary_ref!(cos, cos_ref);
    unary_ref!(sqrt, sqrt_ref);
    unary_ref!(abs, abs_ref);
    unary_ref!(floor, floor_ref);
    fn atan2(&self, other: &Self) -> Self {
        let p = self.prec().max(other.prec());
        BigFloat::from_float(Float::with_val(p, self.inner().atan2_ref(other.inner())))
    }
    fn with_prec(&self, prec: u32) -> Self {
        if self.prec() >= prec {
            self.clone()
        } else {
            self.round_to(prec)
        }
    }
    fn is_finite(&self) -> bool {
        BigFloat::is_finite(self)
    }
    fn pi(prec: u32) -> Self {
        BigFloat::with_val(prec, Constant::Pi)
    }
    fn euler_gamma(prec: u32) -> Self {
        BigFloat::with_val(prec, Constant::Euler)
    }
    fn powf(&self, e: &Self) -> Self {
        let p = self.prec().max(e.prec());
        BigFloat::from_float(Float::with_val(p, rug::ops::Pow::pow(self.inner(), e.inner())))
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Debug)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
    abs_total: f64,
    terms: usize,
}

impl<T: Real> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        CompensatedSum { sum: T::zero(), carry: T::zero(), abs_total: 0.0, terms: 0 }
    }

    pub fn add(&mut self, x: T) {
        self.abs_total += x.to_f64().abs();
        self.terms += 1;
        let t = self.sum.clone() + x.clone();
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum.clone() - t.clone()) + x;
        } else {
            self.carry += (x - t.clone()) + self.sum.clone();
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum.clone() + self.carry.clone()
    }

    pub fn carry(&self) -> T {
        self.carry.clone()
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Sum of |terms|, the scale rounding errors are measured against.
    pub fn abs_total(&self) -> f64 {
        self.abs_total
    }

    /// Rounding bound for the compensated value: 2u|S| + O(n u^2) Σ|x|.
    pub fn rounding_bound(&self, prec: u32) -> f64 {
        let u = T::unit_roundoff(prec);
        2.0 * u * self.value().to_f64().abs() + (self.terms as f64) * u * u * self.abs_total * 4.0
    }
}

/// Compensated sum of complex terms.
#[derive(Clone, Debug)]
pub struct ComplexSum<T> {
    pub re: CompensatedSum<T>,
    pub im: CompensatedSum<T>,
}

impl<T: Real> Default for ComplexSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> ComplexSum<T> {
    pub fn new() -> Self {
        ComplexSum { re: CompensatedSum::new(), im: CompensatedSum::new() }
    }
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }
    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
    pub fn rounding_bound(&self, prec: u32) -> f64 {
        self.re.rounding_bound(prec) + self.im.rounding_bound(prec)
    }
}

pub fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub fn cabs<T: Real>(z: &Complex<T>) -> f64 {
    z.re.to_f64().hypot(z.im.to_f64())
}

pub fn cexp<T: Real>(z: &Complex<T>) -> Complex<T> {
    let m = z.re.exp();
    Complex::new(m.clone() * z.im.cos(), m * z.im.sin())
}

/// Principal logarithm.
pub fn cln<T: Real>(z: &Complex<T>) -> Complex<T> {
    let r = (z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()).sqrt();
    Complex::new(r.ln(), z.im.atan2(&z.re))
}

pub fn cmul<T: Real>(a: &Complex<T>, b: &Complex<T>) -> Complex<T> {
    Complex::new(
        a.re.clone() * b.re.clone() - a.im.clone() * b.im.clone(),
        a.re.clone() * b.im.clone() + a.im.clone() * b.re.clone(),
    )
}

pub fn cscale<T: Real>(a: &Complex<T>, k: &T) -> Complex<T> {
    Complex::new(a.re.clone() * k.clone(), a.im.clone() * k.clone())
}

pub fn is_real<T: Real>(z: &Complex<T>) -> bool {
    z.im.is_zero()
}

/// b^s for real b > 0 and complex s, with the real-exponent cases kept real.
pub fn pow_pos<T: Real>(b: &T, s: &Complex<T>) -> Complex<T> {
    if is_real(s) {
        if s.re == T::one() {
            return real(b.clone());
        }
        if s.re.is_zero() {
            return real(T::one());
        }
        return real(b.powf(&s.re));
    }
    let l = b.ln();
    cexp(&Complex::new(l.clone() * s.re.clone(), l * s.im.clone()))
}
