//! The autocorrelation integral A(λ) = ∫_0^∞ {t}{λt} dt/t², the correction
//! F(x) = ((x+1)/2)A(1) − A(x) − (x/2)log x, and G = 𝒮_F.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Integer, Rational};

use crate::cf::{self, GaussIter};
use crate::error::{Error, Result};
use crate::numbers::{ExactReal, Kind};
use crate::quad;
use crate::real::{real, Real};
use crate::series::{self, EvalResult, GFn, JumpData, SeriesParams};

/// Largest cutoff the quadrature will use.
pub const T_CAP: f64 = 1e9;

/// Upper bound for |F| on [0,1] used by the G tail majorant (observed max ≈ A(1)/2).
pub const SUP_F: f64 = 0.75;

#[derive(Clone, Debug)]
pub struct QuadratureReport<T: Real> {
    pub value: T,
    pub t_used: f64,
    pub tail_estimate: f64,
    pub pieces: usize,
}

/// Convergents p_k/q_k of λ ∈ (0,1] up to the first q_k beyond `qmax`.
fn convergents(lam: &ExactReal, qmax: f64) -> (Vec<(Integer, Integer)>, bool) {
    if *lam == ExactReal::int(1) {
        return (vec![(Integer::from(1), Integer::from(1))], true);
    }
    let mut out = Vec::new();
    let Ok(it) = GaussIter::new(lam) else { return (out, true) };
    for lvl in it {
        let big = lvl.q.to_f64() > qmax;
        out.push((lvl.p, lvl.q));
        if big {
            return (out, false);
        }
    }
    (out, true)
}

struct Plan {
    t: f64,
    a: Integer,
    b: Integer,
    delta_zero: bool,
    estimate: f64,
}

/// Smallest doubling of `t0` whose a-priori tail estimate is below `tol`.
fn plan(conv: &[(Integer, Integer)], exact_end: bool, t0: f64, tol: f64, u: f64) -> Result<Plan> {
    let mut t = t0;
    loop {
        let k = conv.iter().rposition(|(_, q)| q.to_f64() <= t / 16.0).unwrap_or(0);
        let (a, b) = conv[k].clone();
        let delta_zero = exact_end && k + 1 == conv.len();
        let bf = b.to_f64();
        let ts = if a == 0 { t } else { ((t / bf).round().max(1.0)) * bf };
        let model = if delta_zero {
            0.05 * (bf + 1.0) / (ts * ts * ts)
        } else {
            let next = conv.get(k + 1).map(|(a1, b1)| 1.0 / (12.0 * a1.to_f64().max(1.0) * b1.to_f64() * ts));
            0.5 / (ts * ts) + next.unwrap_or(0.0)
        };
        let est = model + 16.0 * u;
        if est < tol {
            return Ok(Plan { t: ts, a, b, delta_zero, estimate: est });
        }
        t *= 2.0;
        if t > T_CAP {
            return Err(Error::ToleranceUnachievable { tol, cap: T_CAP });
        }
    }
}

/// ∫_from^∞ {t}{λt} dt/t² for λ ≥ 0 and from ≥ 0.
pub fn autocorr_tail<T: Real>(lam: &ExactReal, from: &T, tol: f64, prec: u32) -> Result<QuadratureReport<T>> {
    if lam.signum() == std::cmp::Ordering::Less {
        return Err(Error::Domain(format!("λ = {lam} is negative")));
    }
    if *from < T::zero() {
        return Err(Error::Domain("lower limit must be ≥ 0".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    // floats are taken at their exact dyadic value
    let lam = match lam.kind() {
        Kind::Float => ExactReal::Rational(lam.as_rational().unwrap_or_default()),
        _ => lam.clone(),
    };
    if lam.is_zero() {
        return Ok(QuadratureReport { value: T::zero(), t_used: 0.0, tail_estimate: 0.0, pieces: 0 });
    }
    if lam > ExactReal::int(1) {
        let l: T = lam.to_real(prec);
        let lf = l.to_f64();
        let inv = lam.invert()?;
        let r = autocorr_tail(&inv, &(l.clone() * from.clone()), tol / lf, prec)?;
        return Ok(QuadratureReport {
            value: l * r.value,
            t_used: r.t_used,
            tail_estimate: r.tail_estimate * lf,
            pieces: r.pieces,
        });
    }
    let u = T::unit_roundoff(prec);
    let (conv, exact_end) = convergents(&lam, T_CAP / 8.0);
    let from_f = from.to_f64();
    let p = plan(&conv, exact_end, (2.0 * from_f.ceil()).max(1024.0), tol, u)?;
    let lam_t: T = lam.to_real(prec);
    let t_big = T::from_f64_prec(p.t, prec);
    let one = T::one().with_prec(prec);

    let (mut value, start) = if from.is_zero() { (lam_t.clone(), one) } else { (T::zero(), from.with_prec(prec)) };
    let mut pieces = 0;
    if start < t_big {
        let (v, n) = quad::prod_pieces(&lam, &start, &t_big, prec);
        value += v;
        pieces = n;
    }
    // {t}{λt} = B̃1(t)B̃1(λt) + ½B̃1(t) + ½B̃1(λt) + ¼
    let quarter = T::from_f64_prec(0.25, prec);
    let half = T::from_f64_prec(0.5, prec);
    let lt = lam_t.clone() * t_big.clone();
    let j1t = quad::j1(&t_big, prec);
    value += quarter / t_big.clone() + half.clone() * j1t.clone() + half.clone() * lam_t.clone() * quad::j1(&lt, prec);
    // mean of the cross term modelled by the best convergent a/b with b ≤ T/16
    let cross = if p.a == 0 {
        (lt.clone() - lt.floor() - half) * j1t
    } else if p.delta_zero {
        let ab = T::from_integer(&Integer::from(&p.a * &p.b), prec);
        T::one() / (T::from_i64(12, prec) * ab * t_big.clone())
    } else {
        let num = lam.affine(&p.b, &Integer::from(-&p.a)).abs();
        let bdelta: T = num.to_real(prec);
        let delta = bdelta.clone() / T::from_integer(&p.b, prec);
        let a_t = T::from_integer(&p.a, prec);
        delta / (T::from_i64(2, prec) * a_t) * quad::j2(&(bdelta * t_big.clone()), prec)
    };
    value += cross;
    Ok(QuadratureReport { value, t_used: p.t, tail_estimate: p.estimate, pieces })
}

/// A(λ) for λ ≥ 0.
pub fn autocorr_a<T: Real>(lam: &ExactReal, tol: f64, prec: u32) -> Result<QuadratureReport<T>> {
    autocorr_tail(lam, &T::zero(), tol, prec)
}

/// Evaluation context for F and G: fixes precision and tolerance and memoizes
/// A on exact arguments.
pub struct Autocorr<T: Real> {
    pub prec: u32,
    pub tol: f64,
    a1: OnceLock<(T, f64)>,
    memo: Mutex<HashMap<ExactReal, (T, f64)>>,
}

impl<T: Real> Autocorr<T> {
    pub fn new(prec: u32, tol: f64) -> Arc<Self> {
        Arc::new(Autocorr { prec, tol, a1: OnceLock::new(), memo: Mutex::new(HashMap::new()) })
    }

    /// A(λ) with its error estimate, memoized.
    pub fn a(&self, lam: &ExactReal) -> Result<(T, f64)> {
        if let Some(v) = self.memo.lock().expect("memo").get(lam) {
            return Ok(v.clone());
        }
        let r = autocorr_a::<T>(lam, self.tol, self.prec)?;
        let v = (r.value, r.tail_estimate);
        self.memo.lock().expect("memo").insert(lam.clone(), v.clone());
        Ok(v)
    }

    pub fn a1(&self) -> Result<(T, f64)> {
        if let Some(v) = self.a1.get() {
            return Ok(v.clone());
        }
        let v = self.a(&ExactReal::int(1))?;
        Ok(self.a1.get_or_init(|| v).clone())
    }

    /// F(x) for x ≥ 0 with an error bound.
    pub fn f(&self, x: &ExactReal) -> Result<(T, f64)> {
        if x.signum() == std::cmp::Ordering::Less {
            return Err(Error::Domain(format!("F is defined for x ≥ 0, got {x}")));
        }
        let prec = self.prec;
        let (a1, e1) = self.a1()?;
        let half = T::from_f64_prec(0.5, prec);
        if x.is_zero() {
            return Ok((a1 * half, e1 * 0.5));
        }
        let (ax, ex) = self.a(x)?;
        let xt: T = x.to_real(prec);
        let ln_x = -x.neg_log::<T>(prec);
        let v = (xt.clone() + T::one()) * half.clone() * a1 - ax - xt.clone() * half * ln_x.clone();
        let xf = xt.to_f64();
        let err = (xf + 1.0) * 0.5 * e1 + ex + 8.0 * T::unit_roundoff(prec) * (1.0 + xf * ln_x.to_f64().abs());
        Ok((v, err))
    }

    /// Series parameters for G = 𝒮_F: θ = −1, s = 1, g = F.
    pub fn g_params(self: &Arc<Self>) -> Result<SeriesParams<T>> {
        let ctx = Arc::clone(self);
        let g: GFn<T> = Arc::new(move |x: &ExactReal| Ok(real(ctx.f(x)?.0)));
        let (a1, e1) = self.a1()?;
        let g0 = a1 * T::from_f64_prec(0.5, self.prec);
        Ok(SeriesParams::real(-1.0, 1.0, 1.0, g, self.prec)
            .with_endpoints(real(g0), real(T::zero()))
            .with_sup(SUP_F)
            .with_g_error(3.0 * self.tol + e1))
    }

    /// G(x) for any real x (reduced mod 1).
    pub fn g(self: &Arc<Self>, x: &ExactReal, k_max: usize, tol: f64) -> Result<EvalResult<T>> {
        series::s_g(&x.frac(), &self.g_params()?, k_max, tol)
    }

    /// One-sided limits of G at r; the jump right − left is A(1)/q.
    pub fn jumps(self: &Arc<Self>, r: &Rational) -> Result<JumpData<T>> {
        series::limits_at_rational(r, &self.g_params()?)
    }

    /// CSV of (x, G(x), error) over the given points.
    pub fn sweep_csv(self: &Arc<Self>, points: &[ExactReal], k_max: usize, tol: f64, digits: usize) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Domain(e.to_string());
        w.write_record(["x", "G", "error"]).map_err(err)?;
        for x in points {
            let g = self.g(x, k_max, tol)?;
            w.write_record([
                x.to_float(self.prec.max(64)).to_decimal(Some(digits)),
                g.value.re.to_bigfloat().to_decimal(Some(digits)),
                format!("{:.3e}", g.abs_error_estimate),
            ])
            .map_err(err)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Domain(e.to_string()))?).map_err(|e| Error::Domain(e.to_string()))
    }
}

/// Approach points for a one-sided limit at r inside 𝔠 or 𝔠′.
pub fn approach_sequence(r: &Rational, in_c_prime: bool, exponents: &[u32]) -> Result<Vec<ExactReal>> {
    exponents.iter().map(|&e| cf::cell_approach(r, in_c_prime, &Integer::from(Integer::u_pow_u(10, e)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::BigFloat;

    fn a1_oracle() -> f64 {
        (2.0 * std::f64::consts::PI).ln() - 0.5772156649015329
    }

    #[test]
    fn a_at_zero_and_one() {
        let z = autocorr_a::<f64>(&ExactReal::zero(), 1e-10, 53).unwrap();
        assert_eq!(z.value, 0.0);
        let r = autocorr_a::<f64>(&ExactReal::int(1), 1e-10, 53).unwrap();
        assert!((r.value - a1_oracle()).abs() < 1e-10, "{}", r.value - a1_oracle());
        assert!(r.tail_estimate < 1e-10);
    }

    #[test]
    fn a_one_in_bigfloat() {
        let r = autocorr_a::<BigFloat>(&ExactReal::int(1), 1e-14, 128).unwrap();
        let want = (BigFloat::from_f64(2.0, 128) * BigFloat::pi(128)).ln() - BigFloat::euler_gamma(128);
        assert!((r.value - want).abs().to_f64() < 1e-14);
    }

    #[test]
    fn a_half_against_riemann_oracle() {
        // ∫_0^T by midpoint rule, then the ¼/T + tail mean; coarse independent check
        let lam = 0.5f64;
        let t_max = 2000.0;
        let n = 8_000_000usize;
        let h = t_max / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) * h;
            s += (t - t.floor()) * (lam * t - (lam * t).floor()) / (t * t);
        }
        s *= h;
        // tail beyond T: mean of {t}{t/2} is 1/4 + 1/(12·2) → ∫ mean/t²
        s += (0.25 + 1.0 / 24.0) / t_max;
        let a = autocorr_a::<f64>(&ExactReal::ratio(1, 2), 1e-10, 53).unwrap();
        assert!((a.value - s).abs() < 1e-6, "{} {}", a.value, s);
    }

    #[test]
    fn scaling_identity() {
        let a2 = autocorr_a::<f64>(&ExactReal::int(2), 1e-11, 53).unwrap().value;
        let ah = autocorr_a::<f64>(&ExactReal::ratio(1, 2), 1e-11, 53).unwrap().value;
        assert!((a2 - 2.0 * ah).abs() < 1e-10);
    }

    #[test]
    fn irrational_lambda_converges_with_t() {
        let g = ExactReal::golden();
        let lo = autocorr_a::<f64>(&g, 1e-8, 53).unwrap();
        let hi = autocorr_a::<f64>(&g, 1e-11, 53).unwrap();
        assert!(hi.t_used > lo.t_used);
        assert!((lo.value - hi.value).abs() < lo.tail_estimate + hi.tail_estimate);
    }

    #[test]
    fn f_values() {
        let ctx = Autocorr::<f64>::new(53, 1e-11);
        assert_eq!(ctx.f(&ExactReal::int(1)).unwrap().0, 0.0);
        let f0 = ctx.f(&ExactReal::zero()).unwrap().0;
        assert!((f0 - a1_oracle() / 2.0).abs() < 1e-10);
        let (a1, _) = ctx.a1().unwrap();
        let (ah, _) = ctx.a(&ExactReal::ratio(1, 2)).unwrap();
        let fh = ctx.f(&ExactReal::ratio(1, 2)).unwrap().0;
        assert!((fh - (0.75 * a1 - ah + 0.25 * 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn g_basic_values() {
        let ctx = Autocorr::<f64>::new(53, 1e-11);
        assert_eq!(ctx.g(&ExactReal::zero(), 100, 1e-9).unwrap().value.re, 0.0);
        let gh = ctx.g(&ExactReal::ratio(1, 2), 100, 1e-9).unwrap().value.re;
        assert!((gh - ctx.f(&ExactReal::ratio(1, 2)).unwrap().0).abs() < 1e-15);
        let x = ExactReal::golden();
        let g = ctx.g(&x, 200, 1e-10).unwrap();
        let fx = ctx.f(&x).unwrap().0;
        assert!((g.value.re - fx / (1.0 + x.to_f64())).abs() < 1e-9);
    }

    #[test]
    fn jumps_at_half_and_two_fifths() {
        let ctx = Autocorr::<f64>::new(53, 1e-11);
        let (a1, _) = ctx.a1().unwrap();
        let j = ctx.jumps(&Rational::from((1, 2))).unwrap();
        assert!((j.right.re - (j.value.re + a1 / 4.0)).abs() < 1e-14);
        assert!((j.left.re - (j.value.re - a1 / 4.0)).abs() < 1e-14);
        let j = ctx.jumps(&Rational::from((2, 5))).unwrap();
        assert!((j.jump.re - a1 / 5.0).abs() < 1e-14);
        assert!(((j.left.re + j.right.re) / 2.0 - j.value.re).abs() < 1e-14);
        let (l0, l1) = series::endpoint_limits(&ctx.g_params().unwrap()).unwrap();
        assert!((l0.re - a1 / 2.0).abs() < 1e-15 && (l1.re + a1 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn sup_f_below_declared_bound() {
        let ctx = Autocorr::<f64>::new(53, 1e-9);
        let mut m = 0.0f64;
        for i in 0..=64 {
            m = m.max(ctx.f(&ExactReal::ratio(i, 64)).unwrap().0.abs());
        }
        assert!(m < SUP_F, "{m}");
        assert!(m > 0.5);
    }
}
