//! Partial sums of φ₁(x) = Σ B₁(nx)/n, the Sylvester reciprocity identity,
//! the remainder ε₁, and the identity φ₁ = −½𝒲 + G.

use std::cmp::Ordering;
use std::sync::Arc;

use rug::{Float, Integer, Rational};

use crate::autocorr::{autocorr_tail, Autocorr};
use crate::error::{Error, Result};
use crate::numbers::{BigFloat, ExactReal, Kind};
use crate::quad;
use crate::real::{CompensatedSum, Real};
use crate::wilton;

/// Floats are taken at their exact dyadic value.
pub(crate) fn exact_value(x: &ExactReal) -> ExactReal {
    match x.kind() {
        Kind::Float => ExactReal::Rational(x.as_rational().unwrap_or_default()),
        _ => x.clone(),
    }
}

/// B₁(x) = {x} − ½ off the integers, 0 on them.
pub fn b1<T: Real>(x: &ExactReal, prec: u32) -> T {
    if x.is_integer() {
        return T::zero();
    }
    x.frac().to_real::<T>(prec) - T::from_f64_prec(0.5, prec)
}

enum Residues {
    Small { p: u64, q: u64, r: u64 },
    Big { p: Integer, q: Integer, r: Integer },
    Fixed { step: Integer, acc: Integer, w: u32, guard: Integer, y: ExactReal },
}

/// The sequence {m·y} for m = 1, 2, …; `None` marks an exact integer hit.
pub struct FracSeq<T: Real> {
    res: Residues,
    m: u64,
    prec: u32,
    flagged: usize,
    _t: std::marker::PhantomData<T>,
}

impl<T: Real> FracSeq<T> {
    /// `m_max` bounds the number of terms the fixed-point path must keep exact.
    pub fn new(y: &ExactReal, m_max: u64, prec: u32) -> Self {
        let y = exact_value(y).frac();
        let res = match &y {
            ExactReal::Quadratic(_) => {
                let p = T::effective_precision(prec).max(53);
                let w = p + 64 + (64 - m_max.max(1).leading_zeros());
                let scaled = y.to_float(w + 8).into_inner() << w;
                let step = scaled.to_integer().expect("finite");
                let guard = Integer::from(m_max.max(1)) * 4u32;
                Residues::Fixed { step, acc: Integer::new(), w, guard, y: y.clone() }
            }
            _ => {
                let r = y.as_rational().unwrap_or_default();
                let (p, q) = r.into_numer_denom();
                match (p.to_u64(), q.to_u64()) {
                    (Some(p), Some(q)) if q < 1 << 62 => Residues::Small { p, q, r: 0 },
                    _ => Residues::Big { p, q, r: Integer::new() },
                }
            }
        };
        FracSeq { res, m: 0, prec, flagged: 0, _t: std::marker::PhantomData }
    }

    /// Terms whose fixed-point value fell inside the integer guard band and
    /// were recomputed exactly.
    pub fn flagged(&self) -> usize {
        self.flagged
    }
}

impl<T: Real> Iterator for FracSeq<T> {
    type Item = Option<T>;

    fn next(&mut self) -> Option<Option<T>> {
        self.m += 1;
        let prec = self.prec;
        Some(match &mut self.res {
            Residues::Small { p, q, r } => {
                *r = ((*r as u128 + *p as u128) % *q as u128) as u64;
                if *r == 0 {
                    None
                } else {
                    Some(T::from_f64_prec(*r as f64, prec) / T::from_f64_prec(*q as f64, prec))
                }
            }
            Residues::Big { p, q, r } => {
                *r += &*p;
                if *r >= *q {
                    *r -= &*q;
                }
                if r.cmp0() == Ordering::Equal {
                    None
                } else {
                    Some(T::from_rational(&Rational::from((r.clone(), q.clone())), prec))
                }
            }
            Residues::Fixed { step, acc, w, guard, y } => {
                *acc += &*step;
                acc.keep_bits_mut(*w);
                let top = Integer::from(Integer::u_pow_u(2, *w)) - &*guard;
                if *acc < *guard || *acc > top {
                    self.flagged += 1;
                    Some(y.affine(&Integer::from(self.m), &Integer::new()).frac().to_real(prec))
                } else if T::effective_precision(prec) <= 64 {
                    let hi = Integer::from(&*acc >> (*w - 64)).to_u64().expect("64 bits");
                    Some(T::from_f64_prec(hi as f64 * (-64f64).exp2(), prec))
                } else {
                    let f = Float::with_val(T::effective_precision(prec), &*acc) >> *w;
                    Some(T::from_bigfloat(&BigFloat::from_float(f)))
                }
            }
        })
    }
}

/// Σ_{m≤v} B₁(mx)/m with its compensated-summation state.
#[derive(Clone, Debug)]
pub struct PartialSumState<T: Real> {
    pub x: ExactReal,
    pub v: ExactReal,
    pub sum: T,
    pub carry: T,
    /// Non-vanishing terms summed.
    pub terms: usize,
    /// Terms recomputed exactly after landing near an integer.
    pub flagged: usize,
    pub rounding_bound: f64,
}

fn cutoff(v: &ExactReal) -> Result<u64> {
    if v.signum() == Ordering::Less {
        return Err(Error::Domain(format!("cutoff v = {v} is negative")));
    }
    let (fl, _) = v.floor_frac();
    fl.to_u64().ok_or(Error::Domain(format!("cutoff v = {v} is too large")))
}

pub fn phi1_partial<T: Real>(x: &ExactReal, v: &ExactReal, prec: u32) -> Result<PartialSumState<T>> {
    let m_max = cutoff(v)?;
    let half = T::from_f64_prec(0.5, prec);
    let mut acc = CompensatedSum::<T>::new();
    let mut seq = FracSeq::<T>::new(x, m_max, prec);
    for m in 1..=m_max {
        if let Some(f) = seq.next().flatten() {
            acc.add((f - half.clone()) / T::from_f64_prec(m as f64, prec));
        }
    }
    Ok(PartialSumState {
        x: x.clone(),
        v: v.clone(),
        sum: acc.value(),
        carry: acc.carry(),
        terms: acc.terms(),
        flagged: seq.flagged(),
        rounding_bound: acc.rounding_bound(prec),
    })
}

/// Same sum with every term computed from the exact product m·x.
pub fn phi1_partial_naive<T: Real>(x: &ExactReal, v: &ExactReal, prec: u32) -> Result<T> {
    let m_max = cutoff(v)?;
    let x = exact_value(x);
    let mut acc = CompensatedSum::<T>::new();
    for m in 1..=m_max {
        let mx = x.affine(&Integer::from(m), &Integer::new());
        if !mx.is_integer() {
            acc.add(b1::<T>(&mx, prec) / T::from_f64_prec(m as f64, prec));
        }
    }
    Ok(acc.value())
}

fn unit_interval(x: &ExactReal) -> Result<ExactReal> {
    let x = exact_value(x);
    if x.signum() != Ordering::Greater || x >= ExactReal::int(1) {
        return Err(Error::Domain(format!("x = {x} must lie in (0,1)")));
    }
    Ok(x)
}

fn positive_cutoff(v: &ExactReal) -> Result<ExactReal> {
    let v = exact_value(v);
    if v.signum() != Ordering::Greater {
        return Err(Error::Domain(format!("cutoff v = {v} must be positive")));
    }
    Ok(v)
}

/// x·v for rational v.
fn times(x: &ExactReal, v: &ExactReal) -> Result<ExactReal> {
    let (p, q) = v.as_rational().ok_or(Error::Domain("cutoff must be rational".into()))?.into_numer_denom();
    x.mobius(&p, &Integer::new(), &Integer::new(), &q)
}

/// ({xv} − x{v}, xv) at working precision.
fn boundary<T: Real>(x: &ExactReal, v: &ExactReal, prec: u32) -> Result<(T, T)> {
    let xv = times(x, v)?;
    let xt: T = x.to_real(prec);
    let d = xv.frac().to_real::<T>(prec) - xt * v.frac().to_real::<T>(prec);
    Ok((d, xv.to_real(prec)))
}

#[derive(Clone, Debug)]
pub struct SylvesterSides<T: Real> {
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
}

/// Both sides of the reciprocity identity
/// Σ_{m≤v} B₁(mx)/m + x Σ_{n≤xv} B₁(n/x)/n = (integrals and boundary terms).
pub fn sylvester_sides<T: Real>(x: &ExactReal, v: &ExactReal, prec: u32) -> Result<SylvesterSides<T>> {
    let x = unit_interval(x)?;
    let v = positive_cutoff(v)?;
    let xv = times(&x, &v)?;
    let s1 = phi1_partial::<T>(&x, &v, prec)?.sum;
    let s2 = phi1_partial::<T>(&x.invert()?, &xv, prec)?.sum;
    let xt: T = x.to_real(prec);
    let lhs = s1 + xt.clone() * s2;

    let vt: T = v.to_real(prec);
    let xvt: T = xv.to_real(prec);
    let half = T::from_f64_prec(0.5, prec);
    let xm1 = xt.clone() - T::one();
    let (d, _) = boundary::<T>(&x, &v, prec)?;
    let two_xv = T::from_i64(2, prec) * xvt.clone();
    let rhs = xt.clone() * half.clone() * quad::frac_sq_from_zero(&vt, prec) + half.clone() * quad::frac_sq_from_zero(&xvt, prec)
        - quad::prod_from_zero(&x, &vt, prec)
        + xm1.clone() * half.clone() * x.neg_log::<T>(prec)
        + xm1.clone() * half * quad::frac_integral(&vt, &xvt, prec)
        + d.clone() * d.clone() / two_xv.clone()
        + xm1 * d / two_xv;
    let residual = lhs.clone() - rhs.clone();
    Ok(SylvesterSides { lhs, rhs, residual })
}

/// ∫_V^∞ {t}²/t² = 1/(3V) + J1(V) + J2(V).
fn frac_sq_tail<T: Real>(v: &T, prec: u32) -> T {
    T::one() / (T::from_i64(3, prec) * v.clone()) + quad::j1(v, prec) + quad::j2(v, prec)
}

#[derive(Clone, Debug)]
pub struct Eps1<T: Real> {
    pub value: T,
    /// ε₁·xv, the quantity the bound ε₁ ≪ 1/(xv) controls.
    pub scaled: f64,
    pub abs_error_estimate: f64,
}

/// The six-term remainder ε₁(x, v).
pub fn eps1<T: Real>(x: &ExactReal, v: &ExactReal, tol: f64, prec: u32) -> Result<Eps1<T>> {
    let x = unit_interval(x)?;
    let v = positive_cutoff(v)?;
    let vt: T = v.to_real(prec);
    let xt: T = x.to_real(prec);
    let half = T::from_f64_prec(0.5, prec);
    let (d, xvt) = boundary::<T>(&x, &v, prec)?;
    let cross = autocorr_tail::<T>(&x, &vt, tol, prec)?;
    let xm1 = xt.clone() - T::one();
    let two_xv = T::from_i64(2, prec) * xvt.clone();
    let value = -xt * half.clone() * frac_sq_tail(&vt, prec) - half.clone() * frac_sq_tail(&xvt, prec)
        + cross.value
        + xm1.clone() * half * quad::frac_integral(&vt, &xvt, prec)
        + d.clone() * d.clone() / two_xv.clone()
        + xm1 * d / two_xv;
    let scaled = value.to_f64() * xvt.to_f64();
    let err = cross.tail_estimate + 64.0 * T::unit_roundoff(prec);
    Ok(Eps1 { value, scaled, abs_error_estimate: err })
}

#[derive(Clone, Debug)]
pub struct ReassemblyCheck<T: Real> {
    pub residual: T,
    pub error_budget: f64,
}

/// φ₁(x,v) + x φ₁(α(x), xv) − F(x) + ½log(1/x) − ε₁(x,v), which vanishes.
pub fn reassembly<T: Real>(ctx: &Arc<Autocorr<T>>, x: &ExactReal, v: &ExactReal) -> Result<ReassemblyCheck<T>> {
    let prec = ctx.prec;
    let x = unit_interval(x)?;
    let v = positive_cutoff(v)?;
    let xv = times(&x, &v)?;
    let s1 = phi1_partial::<T>(&x, &v, prec)?.sum;
    let s2 = phi1_partial::<T>(&x.gauss_step()?.1, &xv, prec)?.sum;
    let (fx, ef) = ctx.f(&x)?;
    let e = eps1::<T>(&x, &v, ctx.tol, prec)?;
    let xt: T = x.to_real(prec);
    let residual = s1 + xt * s2 - fx + T::from_f64_prec(0.5, prec) * x.neg_log::<T>(prec) - e.value;
    Ok(ReassemblyCheck { residual, error_budget: ef + e.abs_error_estimate + 1e3 * T::unit_roundoff(prec) })
}

#[derive(Clone, Debug)]
pub struct IdentityCheck<T: Real> {
    pub phi1_v: T,
    pub target: T,
    pub gap: f64,
}

/// Compares Σ_{m≤v} B₁(mx)/m with −½𝒲(x) + G(x).
pub fn chowla_identity_check<T: Real>(
    ctx: &Arc<Autocorr<T>>,
    x: &ExactReal,
    v: &ExactReal,
    k_max: usize,
) -> Result<IdentityCheck<T>> {
    let prec = ctx.prec;
    let x = exact_value(x).frac();
    let phi1_v = phi1_partial::<T>(&x, &positive_cutoff(v)?, prec)?.sum;
    let w = wilton::wilton::<T>(&x, k_max, ctx.tol, prec)?;
    let g = ctx.g(&x, k_max, ctx.tol)?;
    let target = -T::from_f64_prec(0.5, prec) * w.value.re + g.value.re;
    let gap = (phi1_v.clone() - target.clone()).abs().to_f64();
    Ok(IdentityCheck { phi1_v, target, gap })
}

/// CSV rows (v, phi1, target, gap) for a list of cutoffs.
pub fn identity_csv<T: Real>(
    ctx: &Arc<Autocorr<T>>,
    x: &ExactReal,
    vs: &[ExactReal],
    k_max: usize,
    digits: usize,
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Domain(e.to_string());
    w.write_record(["v", "phi1", "target", "gap"]).map_err(err)?;
    for v in vs {
        let c = chowla_identity_check(ctx, x, v, k_max)?;
        w.write_record([
            v.to_string(),
            c.phi1_v.to_bigfloat().to_decimal(Some(digits)),
            c.target.to_bigfloat().to_decimal(Some(digits)),
            format!("{:.3e}", c.gap),
        ])
        .map_err(err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Domain(e.to_string()))?).map_err(|e| Error::Domain(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b1_values() {
        assert_eq!(b1::<f64>(&ExactReal::int(3), 53), 0.0);
        assert_eq!(b1::<f64>(&ExactReal::ratio(1, 4), 53), -0.25);
        let g = ExactReal::golden();
        assert!((b1::<f64>(&g, 53) - (g.to_f64() - 0.5)).abs() < 1e-16);
    }

    #[test]
    fn small_partial_sums() {
        let s = phi1_partial::<f64>(&ExactReal::ratio(1, 3), &ExactReal::ratio(1, 2), 53).unwrap();
        assert_eq!((s.sum, s.terms), (0.0, 0));
        let s = phi1_partial::<f64>(&ExactReal::ratio(1, 2), &ExactReal::int(4), 53).unwrap();
        assert_eq!(s.sum, 0.0);
        let s = phi1_partial::<f64>(&ExactReal::ratio(1, 3), &ExactReal::int(3), 53).unwrap();
        assert!((s.sum + 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(s.terms, 2);
    }

    #[test]
    fn fast_path_matches_naive() {
        for (p, q) in [(1, 7), (3, 10), (22, 97), (5, 3)] {
            let x = ExactReal::ratio(p, q);
            let v = ExactReal::int(5000);
            let a = phi1_partial::<f64>(&x, &v, 53).unwrap().sum;
            let b = phi1_partial_naive::<f64>(&x, &v, 53).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn quadratic_fixed_point_matches_exact() {
        let x = ExactReal::quadratic(0, 1, 2, 1).unwrap();
        let v = ExactReal::int(3000);
        let a = phi1_partial::<BigFloat>(&x, &v, 128).unwrap().sum;
        let b = phi1_partial_naive::<BigFloat>(&x, &v, 128).unwrap();
        assert!((a - b).abs().to_f64() < 1e-33);
    }

    #[test]
    fn sylvester_examples() {
        let cases = [
            (ExactReal::ratio(1, 2), ExactReal::int(1), 1e-30),
            (ExactReal::ratio(2, 5), ExactReal::int(1000), 1e-25),
            (ExactReal::golden(), ExactReal::int(100), 1e-25),
            (ExactReal::ratio(3711, 10000), ExactReal::ratio(11, 2), 1e-30),
        ];
        for (x, v, tol) in cases {
            let s = sylvester_sides::<BigFloat>(&x, &v, 128).unwrap();
            assert!(s.residual.abs().to_f64() < tol, "{x} {v}: {}", s.residual);
        }
    }

    #[test]
    fn eps1_scaling_and_decay() {
        let x = ExactReal::ratio(2, 5);
        let a = eps1::<f64>(&x, &ExactReal::int(1000), 1e-13, 53).unwrap();
        let b = eps1::<f64>(&x, &ExactReal::int(1_000_000), 1e-12, 53).unwrap();
        assert!(a.scaled.abs() < 10.0);
        assert!(b.value.abs() < a.value.abs() * 1e-2, "{} {}", a.value, b.value);
    }

    #[test]
    fn reassembly_at_two_fifths() {
        let ctx = Autocorr::<f64>::new(53, 1e-12);
        let r = reassembly(&ctx, &ExactReal::ratio(2, 5), &ExactReal::int(100)).unwrap();
        assert!(r.residual.abs() < r.error_budget, "{} {}", r.residual, r.error_budget);
    }

    #[test]
    fn identity_at_zero_and_one_third() {
        let ctx = Autocorr::<f64>::new(53, 1e-11);
        let c = chowla_identity_check(&ctx, &ExactReal::zero(), &ExactReal::int(100), 100).unwrap();
        assert_eq!(c.gap, 0.0);
        let c = chowla_identity_check(&ctx, &ExactReal::ratio(1, 3), &ExactReal::int(300_000), 100).unwrap();
        assert!(c.gap < 1e-3, "{}", c.gap);
    }
}
