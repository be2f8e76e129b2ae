use std::cmp::Ordering;
use std::fmt;

use rug::ops::DivRounding;
use rug::{Float, Integer, Rational};

use super::BigFloat;
use crate::error::{Error, Result};

/// (a + b√d)/c with d squarefree, b ≠ 0, c > 0 and gcd(a, b, c) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIrrational {
    a: Integer,
    b: Integer,
    d: Integer,
    c: Integer,
}

/// Outcome of building a quadratic form that may collapse to a rational.
pub enum QuadOrRational {
    Quad(QuadIrrational),
    Rational(Rational),
}

impl QuadIrrational {
    /// Builds (a + b√d)/c, pulling square factors out of d.
    pub fn build(a: Integer, b: Integer, d: Integer, c: Integer) -> Result<QuadOrRational> {
        if c == 0 {
            return Err(Error::DivisionByZero);
        }
        if d < 0 {
            return Err(Error::Domain("negative radicand".into()));
        }
        let (k, d) = split_square(d);
        let b = b * k;
        if b == 0 || d == 0 || d == 1 {
            let num = a + if d == 1 { b } else { Integer::new() };
            return Ok(QuadOrRational::Rational(Rational::from((num, c))));
        }
        Ok(QuadOrRational::Quad(Self::canonical(a, b, d, c)))
    }

    /// Like [`build`](Self::build) but insists the value is irrational.
    pub fn new(a: Integer, b: Integer, d: Integer, c: Integer) -> Result<Self> {
        match Self::build(a, b, d, c)? {
            QuadOrRational::Quad(q) => Ok(q),
            QuadOrRational::Rational(_) => Err(Error::Domain("value is rational".into())),
        }
    }

    fn canonical(mut a: Integer, mut b: Integer, d: Integer, mut c: Integer) -> Self {
        let g = Integer::from(a.gcd_ref(&b)).gcd(&c);
        if g != 1 {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        if c < 0 {
            a = -a;
            b = -b;
            c = -c;
        }
        QuadIrrational { a, b, d, c }
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }
    pub fn b(&self) -> &Integer {
        &self.b
    }
    pub fn d(&self) -> &Integer {
        &self.d
    }
    pub fn c(&self) -> &Integer {
        &self.c
    }

    /// Sign of the value; never zero.
    pub fn signum(&self) -> Ordering {
        sign_of(&self.a, &self.b, &self.d)
    }

    pub fn floor(&self) -> Integer {
        floor_of(&self.a, &self.b, &self.d, &self.c)
    }

    pub fn floor_frac(&self) -> (Integer, QuadIrrational) {
        let f = self.floor();
        let a = &self.a - Integer::from(&f * &self.c);
        (f, QuadIrrational { a, b: self.b.clone(), d: self.d.clone(), c: self.c.clone() })
    }

    /// 1/x, rationalized by the conjugate.
    pub fn recip(&self) -> QuadIrrational {
        let norm = Integer::from(self.a.square_ref()) - Integer::from(self.b.square_ref()) * &self.d;
        Self::canonical(Integer::from(&self.c * &self.a), -Integer::from(&self.c * &self.b), self.d.clone(), norm)
    }

    /// m·x + n for integers m ≠ 0, n.
    pub fn affine(&self, m: &Integer, n: &Integer) -> QuadIrrational {
        debug_assert!(*m != 0);
        Self::canonical(
            Integer::from(m * &self.a) + Integer::from(n * &self.c),
            Integer::from(m * &self.b),
            self.d.clone(),
            self.c.clone(),
        )
    }

    /// (m11·x + m12)/(m21·x + m22) for an integer matrix of nonzero determinant.
    pub fn mobius(&self, m11: &Integer, m12: &Integer, m21: &Integer, m22: &Integer) -> Result<QuadIrrational> {
        let det = Integer::from(m11 * m22) - Integer::from(m12 * m21);
        if det == 0 {
            return Err(Error::Domain("singular Möbius map".into()));
        }
        // numerator N = (n0 + n1√d)/c, denominator D = (e0 + e1√d)/c
        let n0 = Integer::from(m11 * &self.a) + Integer::from(m12 * &self.c);
        let n1 = Integer::from(m11 * &self.b);
        let e0 = Integer::from(m21 * &self.a) + Integer::from(m22 * &self.c);
        let e1 = Integer::from(m21 * &self.b);
        // N/D = (n0 + n1√d)(e0 − e1√d) / (e0² − e1² d)
        let a = Integer::from(&n0 * &e0) - Integer::from(&n1 * &e1) * &self.d;
        let b = Integer::from(&n1 * &e0) - Integer::from(&n0 * &e1);
        let c = Integer::from(e0.square_ref()) - Integer::from(e1.square_ref()) * &self.d;
        Ok(Self::canonical(a, b, self.d.clone(), c))
    }

    pub fn neg(&self) -> QuadIrrational {
        QuadIrrational { a: -self.a.clone(), b: -self.b.clone(), d: self.d.clone(), c: self.c.clone() }
    }

    pub fn abs(&self) -> QuadIrrational {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        // (a·den − num·c + b·den·√d) / (c·den)
        let a = Integer::from(&self.a * r.denom()) - Integer::from(r.numer() * &self.c);
        let b = Integer::from(&self.b * r.denom());
        sign_of(&a, &b, &self.d)
    }

    pub fn cmp_quad(&self, other: &QuadIrrational) -> Ordering {
        if self.d == other.d {
            let a = Integer::from(&self.a * &other.c) - Integer::from(&other.a * &self.c);
            let b = Integer::from(&self.b * &other.c) - Integer::from(&other.b * &self.c);
            if b == 0 {
                return a.cmp0();
            }
            return sign_of(&a, &b, &self.d);
        }
        // distinct squarefree radicands: the values differ, so refining terminates
        let mut prec = 128;
        loop {
            let x = self.to_float(prec);
            let y = other.to_float(prec);
            let diff = Float::with_val(prec + 8, x.inner() - y.inner());
            let tiny = x.half_ulp() * Rational::from(4);
            let tiny = tiny + y.half_ulp() * Rational::from(4);
            let diff_q = diff.to_rational().unwrap_or_default();
            if Rational::from(diff_q.abs_ref()) > tiny {
                return diff_q.cmp0();
            }
            prec *= 2;
        }
    }

    /// Correctly rounded binary value at `prec` bits.
    pub fn to_float(&self, prec: u32) -> BigFloat {
        let prec = prec.max(super::bigfloat::MIN_PREC);
        let negative = self.signum() == Ordering::Less;
        let (a, b) = if negative { (-self.a.clone(), -self.b.clone()) } else { (self.a.clone(), self.b.clone()) };
        let mag_bits = |i: &Integer| i.significant_bits() as i64;
        let top = mag_bits(&a).max(mag_bits(&b) + (mag_bits(&self.d) + 1) / 2);
        let mut k: i64 = prec as i64 + 8 + mag_bits(&self.c) - top;
        loop {
            let n = if k >= 0 {
                floor_of(&(Integer::from(&a) << k as u32), &(Integer::from(&b) << k as u32), &self.d, &self.c)
            } else {
                floor_of(&a, &b, &self.d, &(Integer::from(&self.c) << (-k) as u32))
            };
            let bits = n.significant_bits() as i64;
            if bits >= prec as i64 + 2 {
                let odd = (n << 1u32) + 1u32;
                let mut f = Float::with_val(prec, &odd);
                f >>= (k + 1) as i32;
                if negative {
                    f = -f;
                }
                return BigFloat::from_float(f);
            }
            k += if n == 0 { 64 } else { prec as i64 + 2 - bits + 4 };
        }
    }
}

/// Largest k with k² | d, and d / k².
fn split_square(mut d: Integer) -> (Integer, Integer) {
    let mut k = Integer::from(1);
    if d <= 1 {
        return (k, d);
    }
    if d.is_perfect_square() {
        let r = d.sqrt();
        return (r, Integer::from(1));
    }
    let mut p = Integer::from(2);
    while Integer::from(p.square_ref()) <= d {
        let p2 = Integer::from(p.square_ref());
        while d.is_divisible(&p2) {
            d /= &p2;
            k *= &p;
        }
        p += 1;
        if d.is_perfect_square() {
            let r = Integer::from(d.sqrt_ref());
            k *= r;
            return (k, Integer::from(1));
        }
    }
    (k, d)
}

/// Sign of a + b√d for squarefree d > 1 (never zero unless a = b = 0).
pub(crate) fn sign_of(a: &Integer, b: &Integer, d: &Integer) -> Ordering {
    let sa = a.cmp0();
    let sb = b.cmp0();
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    let a2 = Integer::from(a.square_ref());
    let b2d = Integer::from(b.square_ref()) * d;
    if a2 > b2d {
        sa
    } else {
        sb
    }
}

/// ⌊(a + b√d)/c⌋ for c > 0 and b√d irrational, by integer square-root bracketing.
pub(crate) fn floor_of(a: &Integer, b: &Integer, d: &Integer, c: &Integer) -> Integer {
    debug_assert!(*c > 0);
    if *b == 0 {
        return a.clone().div_floor(c.clone());
    }
    let s = (Integer::from(b.square_ref()) * d).sqrt();
    // b√d lies strictly inside (s, s+1) or (−s−1, −s)
    let n = if *b > 0 { Integer::from(a + &s) } else { Integer::from(a - &s) - 1u32 };
    n.div_floor(c.clone())
}

impl fmt::Display for QuadIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b < 0 { '-' } else { '+' };
        write!(f, "({}{}{}*sqrt({}))/{}", self.a, sign, Integer::from(self.b.abs_ref()), self.d, self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_conj() -> QuadIrrational {
        QuadIrrational::new(Integer::from(-1), Integer::from(1), Integer::from(5), Integer::from(2)).unwrap()
    }

    #[test]
    fn floor_frac_of_golden_ratio() {
        let phi = QuadIrrational::new(1.into(), 1.into(), 5.into(), 2.into()).unwrap();
        let (f, r) = phi.floor_frac();
        assert_eq!(f, 1);
        assert_eq!(r, golden_conj());
    }

    #[test]
    fn recip_of_golden_conjugate() {
        let phi = QuadIrrational::new(1.into(), 1.into(), 5.into(), 2.into()).unwrap();
        assert_eq!(golden_conj().recip(), phi);
        assert_eq!(golden_conj().recip().recip(), golden_conj());
    }

    #[test]
    fn square_factors_move_into_b() {
        let q = QuadIrrational::new(0.into(), 1.into(), 12.into(), 1.into()).unwrap();
        assert_eq!(q.b().to_i32(), Some(2));
        assert_eq!(q.d().to_i32(), Some(3));
        assert!(QuadIrrational::new(1.into(), 1.into(), 9.into(), 1.into()).is_err());
    }

    #[test]
    fn correctly_rounded_golden() {
        let x = golden_conj().to_float(128);
        let s = x.to_decimal(Some(38));
        assert!(s.starts_with("0.61803398874989484820458683436563811772"), "{s}");
    }

    #[test]
    fn display_round_trip_shape() {
        assert_eq!(golden_conj().to_string(), "(-1+1*sqrt(5))/2");
        assert_eq!(golden_conj().neg().to_string(), "(1-1*sqrt(5))/2");
    }

    #[test]
    fn tiny_values_round_correctly() {
        // F_40 − F_39·φ is about 1e-8; exact rounding must survive the cancellation
        let phi = QuadIrrational::new(1.into(), 1.into(), 5.into(), 2.into()).unwrap();
        let v = phi.affine(&Integer::from(-63245986), &Integer::from(102334155));
        let f = v.to_float(100);
        let hi = v.to_float(400);
        let diff = (f.to_f64() - hi.to_f64()).abs() / hi.to_f64().abs();
        assert!(diff < 1e-15);
    }
}
