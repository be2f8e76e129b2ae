use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rug::{Float, Integer, Rational};

use super::quadratic::{QuadIrrational, QuadOrRational};
use super::BigFloat;
use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Rational,
    Quadratic,
    Float,
}

/// Rational, quadratic irrational, or binary float.
#[derive(Clone, Debug)]
pub enum ExactReal {
    Rational(Rational),
    Quadratic(QuadIrrational),
    Float(BigFloat),
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal::Rational(Rational::new())
    }

    pub fn int(n: i64) -> Self {
        ExactReal::Rational(Rational::from(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        ExactReal::Rational(Rational::from((p, q)))
    }

    pub fn rational(r: Rational) -> Self {
        ExactReal::Rational(r)
    }

    /// (a + b√d)/c; collapses to a rational when √d is rational or b = 0.
    pub fn quadratic(a: i64, b: i64, d: i64, c: i64) -> Result<Self> {
        Self::quadratic_big(a.into(), b.into(), d.into(), c.into())
    }

    pub fn quadratic_big(a: Integer, b: Integer, d: Integer, c: Integer) -> Result<Self> {
        Ok(match QuadIrrational::build(a, b, d, c)? {
            QuadOrRational::Quad(q) => ExactReal::Quadratic(q),
            QuadOrRational::Rational(r) => ExactReal::Rational(r),
        })
    }

    /// (√5 − 1)/2.
    pub fn golden() -> Self {
        Self::quadratic(-1, 1, 5, 2).expect("valid")
    }

    /// √2 − 1.
    pub fn silver() -> Self {
        Self::quadratic(-1, 1, 2, 1).expect("valid")
    }

    pub fn float(f: BigFloat) -> Self {
        ExactReal::Float(f)
    }

    pub fn kind(&self) -> Kind {
        match self {
            ExactReal::Rational(_) => Kind::Rational,
            ExactReal::Quadratic(_) => Kind::Quadratic,
            ExactReal::Float(_) => Kind::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactReal::Rational(r) => r.cmp0() == Ordering::Equal,
            ExactReal::Quadratic(_) => false,
            ExactReal::Float(f) => f.is_zero_value(),
        }
    }

    pub fn signum(&self) -> Ordering {
        match self {
            ExactReal::Rational(r) => r.cmp0(),
            ExactReal::Quadratic(q) => q.signum(),
            ExactReal::Float(f) => f.inner().cmp0().unwrap_or(Ordering::Equal),
        }
    }

    /// Exact value for the rational and float kinds.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            ExactReal::Rational(r) => Some(r.clone()),
            ExactReal::Quadratic(_) => None,
            ExactReal::Float(f) => f.to_rational(),
        }
    }

    /// Float precision carried by a float input, if any.
    pub fn float_prec(&self) -> Option<u32> {
        match self {
            ExactReal::Float(f) => Some(f.prec()),
            _ => None,
        }
    }

    pub fn floor_frac(&self) -> (Integer, ExactReal) {
        match self {
            ExactReal::Rational(r) => {
                let (fr, fl) = r.clone().fract_floor(Integer::new());
                (fl, ExactReal::Rational(fr))
            }
            ExactReal::Quadratic(q) => {
                let (fl, fr) = q.floor_frac();
                (fl, ExactReal::Quadratic(fr))
            }
            ExactReal::Float(f) => {
                let fl = f.floor_integer();
                // x − ⌊x⌋ is representable on the same ulp grid, so this is exact
                let fr = Float::with_val(f.prec(), f.inner() - &fl);
                (fl, ExactReal::Float(BigFloat::from_float(fr)))
            }
        }
    }

    pub fn frac(&self) -> ExactReal {
        self.floor_frac().1
    }

    pub fn invert(&self) -> Result<ExactReal> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            ExactReal::Rational(r) => ExactReal::Rational(Rational::from(r.recip_ref())),
            ExactReal::Quadratic(q) => ExactReal::Quadratic(q.recip()),
            ExactReal::Float(f) => ExactReal::Float(BigFloat::from_float(Float::with_val(f.prec(), 1 / f.inner()))),
        })
    }

    /// One Gauss step for x in (0,1): (⌊1/x⌋, {1/x}).
    pub fn gauss_step(&self) -> Result<(Integer, ExactReal)> {
        Ok(self.invert()?.floor_frac())
    }

    /// m·x + n; float inputs are treated as their exact dyadic value.
    pub fn affine(&self, m: &Integer, n: &Integer) -> ExactReal {
        if *m == 0 {
            return ExactReal::Rational(Rational::from(n.clone()));
        }
        match self {
            ExactReal::Quadratic(q) => ExactReal::Quadratic(q.affine(m, n)),
            _ => {
                let r = self.as_rational().unwrap_or_default();
                ExactReal::Rational(r * m + n)
            }
        }
    }

    /// (m11·x + m12)/(m21·x + m22); floats are taken at their exact dyadic value.
    pub fn mobius(&self, m11: &Integer, m12: &Integer, m21: &Integer, m22: &Integer) -> Result<ExactReal> {
        match self {
            ExactReal::Quadratic(q) => Ok(ExactReal::Quadratic(q.mobius(m11, m12, m21, m22)?)),
            _ => {
                let r = self.as_rational().unwrap_or_default();
                let den = Rational::from(&r * m21) + m22;
                if den.cmp0() == Ordering::Equal {
                    return Err(Error::DivisionByZero);
                }
                Ok(ExactReal::Rational((r * m11 + m12) / den))
            }
        }
    }

    /// Exact product; two quadratics must share their radicand.
    pub fn mul(&self, other: &ExactReal) -> Result<ExactReal> {
        match (self, other) {
            (ExactReal::Quadratic(x), ExactReal::Quadratic(y)) => {
                if x.d() != y.d() {
                    return Err(Error::Domain(format!("product of √{} and √{} leaves the field", x.d(), y.d())));
                }
                let a = Integer::from(x.a() * y.a()) + Integer::from(x.b() * y.b()) * x.d();
                let b = Integer::from(x.a() * y.b()) + Integer::from(x.b() * y.a());
                ExactReal::quadratic_big(a, b, x.d().clone(), Integer::from(x.c() * y.c()))
            }
            (ExactReal::Quadratic(_), _) => other.mul(self),
            _ => {
                let (p, q) = self.as_rational().unwrap_or_default().into_numer_denom();
                other.mobius(&p, &Integer::new(), &Integer::new(), &q)
            }
        }
    }

    pub fn abs(&self) -> ExactReal {
        match self {
            ExactReal::Rational(r) => ExactReal::Rational(Rational::from(r.abs_ref())),
            ExactReal::Quadratic(q) => ExactReal::Quadratic(q.abs()),
            ExactReal::Float(f) => ExactReal::Float(BigFloat::from_float(Float::with_val(f.prec(), f.inner().abs_ref()))),
        }
    }

    pub fn neg(&self) -> ExactReal {
        self.affine(&Integer::from(-1), &Integer::new())
    }

    /// Correctly rounded binary value at `prec` bits.
    pub fn to_float(&self, prec: u32) -> BigFloat {
        match self {
            ExactReal::Rational(r) => BigFloat::from_rational(r, prec),
            ExactReal::Quadratic(q) => q.to_float(prec),
            ExactReal::Float(f) => f.round_to(prec),
        }
    }

    pub fn to_real<T: Real>(&self, prec: u32) -> T {
        match self {
            ExactReal::Rational(r) => T::from_rational(r, prec),
            ExactReal::Float(f) if T::effective_precision(prec) >= f.prec() => T::from_bigfloat(f),
            _ => T::from_bigfloat(&self.to_float(T::effective_precision(prec))),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real::<f64>(53)
    }

    /// −log x for 0 < x < 1 with a single rounding of x (log1p near 1).
    pub fn neg_log<T: Real>(&self, prec: u32) -> T {
        if *self > ExactReal::ratio(1, 2) {
            let xm1 = self.affine(&Integer::from(1), &Integer::from(-1));
            -xm1.to_real::<T>(prec).ln_1p()
        } else {
            let v = self.to_real::<T>(prec);
            if v > T::zero() && v.is_finite() {
                return -v.ln();
            }
            // below the scalar's exponent range
            let b: BigFloat = self.to_real(prec.max(64));
            T::from_bigfloat(&-b.ln())
        }
    }

    pub fn cmp_exact(&self, other: &ExactReal) -> Ordering {
        use ExactReal::*;
        match (self, other) {
            (Quadratic(a), Quadratic(b)) => a.cmp_quad(b),
            (Quadratic(a), _) => a.cmp_rational(&other.as_rational().unwrap_or_default()),
            (_, Quadratic(b)) => b.cmp_rational(&self.as_rational().unwrap_or_default()).reverse(),
            _ => {
                let a = self.as_rational().unwrap_or_default();
                let b = other.as_rational().unwrap_or_default();
                a.cmp(&b)
            }
        }
    }

    /// Whether the value is an integer, decided exactly.
    pub fn is_integer(&self) -> bool {
        match self {
            ExactReal::Quadratic(_) => false,
            _ => self.as_rational().map(|r| *r.denom() == 1).unwrap_or(false),
        }
    }
}

impl PartialEq for ExactReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for ExactReal {}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl Hash for ExactReal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            ExactReal::Quadratic(q) => {
                1u8.hash(state);
                q.hash(state);
            }
            _ => {
                0u8.hash(state);
                self.as_rational().unwrap_or_default().hash(state);
            }
        }
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(r) => write!(f, "{r}"),
            ExactReal::Quadratic(q) => write!(f, "{q}"),
            ExactReal::Float(x) => write!(f, "{}@{}", x.to_decimal(None), x.prec()),
        }
    }
}

impl From<Rational> for ExactReal {
    fn from(r: Rational) -> Self {
        ExactReal::Rational(r)
    }
}

impl From<QuadIrrational> for ExactReal {
    fn from(q: QuadIrrational) -> Self {
        ExactReal::Quadratic(q)
    }
}

impl From<BigFloat> for ExactReal {
    fn from(f: BigFloat) -> Self {
        ExactReal::Float(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_frac_examples() {
        let (f, r) = ExactReal::ratio(7, 3).floor_frac();
        assert_eq!(f, 2);
        assert_eq!(r, ExactReal::ratio(1, 3));
        let (f, r) = ExactReal::ratio(-1, 2).floor_frac();
        assert_eq!(f, -1);
        assert_eq!(r, ExactReal::ratio(1, 2));
        let phi = ExactReal::quadratic(1, 1, 5, 2).unwrap();
        let (f, r) = phi.floor_frac();
        assert_eq!(f, 1);
        assert_eq!(r, ExactReal::golden());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(ExactReal::ratio(2, 5).invert().unwrap(), ExactReal::ratio(5, 2));
        assert_eq!(ExactReal::golden().invert().unwrap(), ExactReal::quadratic(1, 1, 5, 2).unwrap());
        let q = ExactReal::float(BigFloat::from_f64(0.25, 128)).invert().unwrap();
        assert_eq!(q.to_f64(), 4.0);
        assert_eq!(ExactReal::zero().invert(), Err(Error::DivisionByZero));
    }

    #[test]
    fn cross_kind_order() {
        let g = ExactReal::golden();
        assert!(ExactReal::ratio(1, 2) < g && g < ExactReal::ratio(2, 3));
        assert!(ExactReal::float(BigFloat::from_f64(0.625, 64)) > g);
        assert_eq!(ExactReal::float(BigFloat::from_f64(0.5, 64)), ExactReal::ratio(1, 2));
        assert!(ExactReal::silver() < g);
    }

    #[test]
    fn neg_log_near_one_keeps_relative_accuracy() {
        let x = ExactReal::ratio(999_999_999, 1_000_000_000);
        let v: f64 = x.neg_log(53);
        assert!((v - 1.0000000005e-9).abs() < 1e-22);
    }

    #[test]
    fn products() {
        let g = ExactReal::golden();
        // x² = 1 − x
        let one_minus = g.affine(&Integer::from(-1), &Integer::from(1));
        assert_eq!(g.mul(&g).unwrap(), one_minus);
        assert_eq!(
            g.mul(&ExactReal::ratio(2, 3)).unwrap(),
            g.mobius(&Integer::from(2), &Integer::new(), &Integer::new(), &Integer::from(3)).unwrap()
        );
        let s = ExactReal::silver();
        assert!(g.mul(&s).is_err());
        // (√2 − 1)(√2 + 1) = 1
        assert_eq!(s.mul(&s.affine(&Integer::from(1), &Integer::from(2))).unwrap(), ExactReal::int(1));
    }
}
