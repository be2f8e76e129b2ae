//! The generic series 𝒮_g(x) = Σ_j θ^j β_{j−1}(x)^s g(α_j(x)) and its
//! functional-equation machinery.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rug::{Integer, Rational};

use crate::cf::{self, GaussIter, Side};
use crate::error::{Error, Result};
use crate::numbers::{ExactReal, Kind};
use crate::real::{cabs, cmul, pow_pos, real, ComplexSum, Real};

/// Source function g: (0,1) → ℂ, evaluated on exact arguments.
pub type GFn<T> = Arc<dyn Fn(&ExactReal) -> Result<Complex<T>> + Send + Sync>;

#[derive(Clone)]
pub struct SeriesParams<T: Real> {
    pub theta: Complex<T>,
    pub s: Complex<T>,
    /// Exponent of the AFE cutoff transport; not used by 𝒮_g itself.
    pub a: f64,
    pub g: GFn<T>,
    pub g0: Option<Complex<T>>,
    pub g1: Option<Complex<T>>,
    /// sup |g| on (0,1) when known; enables the rigorous tail majorant.
    pub sup_g: Option<f64>,
    /// Absolute error of each g evaluation (e.g. from quadrature).
    pub g_abs_err: f64,
    pub prec: u32,
}

impl<T: Real> fmt::Debug for SeriesParams<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesParams")
            .field("theta", &self.theta)
            .field("s", &self.s)
            .field("a", &self.a)
            .field("g0", &self.g0)
            .field("g1", &self.g1)
            .field("sup_g", &self.sup_g)
            .field("g_abs_err", &self.g_abs_err)
            .field("prec", &self.prec)
            .finish()
    }
}

impl<T: Real> SeriesParams<T> {
    pub fn new(theta: Complex<T>, s: Complex<T>, a: f64, g: GFn<T>, prec: u32) -> Self {
        SeriesParams { theta, s, a, g, g0: None, g1: None, sup_g: None, g_abs_err: 0.0, prec }
    }

    /// Real θ and s.
    pub fn real(theta: f64, s: f64, a: f64, g: GFn<T>, prec: u32) -> Self {
        Self::new(real(T::from_f64_prec(theta, prec)), real(T::from_f64_prec(s, prec)), a, g, prec)
    }

    pub fn with_endpoints(mut self, g0: Complex<T>, g1: Complex<T>) -> Self {
        self.g0 = Some(g0);
        self.g1 = Some(g1);
        self
    }

    pub fn with_sup(mut self, sup: f64) -> Self {
        self.sup_g = Some(sup);
        self
    }

    pub fn with_g_error(mut self, err: f64) -> Self {
        self.g_abs_err = err;
        self
    }

    pub fn sigma(&self) -> f64 {
        self.s.re.to_f64()
    }

    pub fn theta_abs(&self) -> f64 {
        cabs(&self.theta)
    }

    /// Whether |θ| < φ^σ with σ > 0, the normal-convergence regime.
    pub fn normally_convergent(&self) -> bool {
        let sigma = self.sigma();
        sigma > 0.0 && self.theta_abs() < golden_ratio().powf(sigma)
    }

    /// b^s for an exact positive b.
    pub fn pow_s(&self, b: &ExactReal) -> Complex<T> {
        let bt: T = b.to_real(self.prec);
        pow_pos(&bt, &self.s)
    }

    fn eval_g(&self, x: &ExactReal, j: usize) -> Result<Complex<T>> {
        (self.g)(x).map_err(|e| Error::at_level(j, e))
    }
}

/// g(x) = log(1/x).
pub fn neg_log_g<T: Real>(prec: u32) -> GFn<T> {
    Arc::new(move |x: &ExactReal| {
        if x.signum() != std::cmp::Ordering::Greater {
            return Err(Error::Domain(format!("log(1/x) at x = {x}")));
        }
        Ok(real(x.neg_log::<T>(prec)))
    })
}

pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Converged,
    Truncated,
    DivergentSuspected,
    ExactFinite,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Converged => "converged",
            Status::Truncated => "truncated",
            Status::DivergentSuspected => "divergent-suspected",
            Status::ExactFinite => "exact-finite",
        })
    }
}

#[derive(Clone, Debug)]
pub struct EvalResult<T: Real> {
    pub value: Complex<T>,
    pub abs_error_estimate: f64,
    pub status: Status,
    pub terms_used: usize,
    /// False when the tail estimate is a heuristic rather than a majorant.
    pub rigorous: bool,
}

impl<T: Real> EvalResult<T> {
    pub fn exact(value: Complex<T>, err: f64) -> Self {
        EvalResult { value, abs_error_estimate: err, status: Status::ExactFinite, terms_used: 0, rigorous: true }
    }

    pub fn re(&self) -> &T {
        &self.value.re
    }

    /// "value ± radius", or just the value for an exact-finite result.
    pub fn format(&self, digits: usize) -> String {
        let v = fmt_complex(&self.value, digits);
        if self.status == Status::ExactFinite && self.abs_error_estimate == 0.0 {
            v
        } else {
            format!("{v} ± {:.0e}", self.abs_error_estimate.max(f64::MIN_POSITIVE))
        }
    }
}

pub fn fmt_complex<T: Real>(z: &Complex<T>, digits: usize) -> String {
    let re = z.re.to_bigfloat().to_decimal(Some(digits));
    if z.im.is_zero() {
        re
    } else {
        let im = z.im.to_bigfloat().to_decimal(Some(digits));
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

/// Σ_{i≥0} |θ|^i F_{i+1}^{−σ}, or None when it cannot be bounded.
pub fn majorant_factor(theta_abs: f64, sigma: f64) -> Option<f64> {
    if sigma <= 0.0 && theta_abs >= 1.0 {
        return None;
    }
    // for i ≥ 6 consecutive Fibonacci ratios F_{i+1}/F_{i+2} stay below 13/21
    let r = theta_abs * (13.0f64 / 21.0).powf(sigma.max(0.0));
    if r >= 1.0 {
        return None;
    }
    let (mut fa, mut fb) = (0.0f64, 1.0f64);
    let mut sum = 0.0;
    let mut th = 1.0;
    for i in 0..100_000 {
        let term = th * fb.powf(-sigma);
        sum += term;
        if i >= 6 && term < 1e-40 * sum {
            return Some(sum + term * r / (1.0 - r));
        }
        th *= theta_abs;
        let c = fa + fb;
        fa = fb;
        fb = c;
        if !fb.is_finite() || !th.is_finite() {
            break;
        }
    }
    if sum.is_finite() {
        Some(sum)
    } else {
        None
    }
}

/// Verdict of a sliding-window Cauchy test on a sequence of partial sums.
pub fn cauchy_verdict(partials: &[f64]) -> Status {
    let n = partials.len();
    if n < 2 {
        return Status::Truncated;
    }
    let w = (n / 2).clamp(2, 16);
    let diam = |xs: &[f64]| {
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let last = &partials[n - w..];
    let d2 = diam(last);
    let scale = 1.0 + partials[n - 1].abs();
    if !d2.is_finite() || d2 / scale >= 0.1 {
        return Status::DivergentSuspected;
    }
    if d2 / scale < 1e-12 {
        return Status::Converged;
    }
    if n >= 2 * w {
        let d1 = diam(&partials[n - 2 * w..n - w]);
        if d2 < 0.5 * d1 && d2 / scale < 1e-3 {
            return Status::Converged;
        }
    }
    Status::Truncated
}

#[derive(Clone, Debug)]
pub struct TraceRow<T: Real> {
    pub j: usize,
    pub term: Complex<T>,
    pub partial: Complex<T>,
    pub beta_prev: T,
}

/// Full evaluation with an optional per-term trace.
pub struct Evaluation<T: Real> {
    pub result: EvalResult<T>,
    pub trace: Vec<TraceRow<T>>,
}

fn ensure_unit(x: &ExactReal) -> Result<()> {
    if x.signum() == std::cmp::Ordering::Less || *x >= ExactReal::int(1) {
        return Err(Error::Domain(format!("{x} is outside [0,1)")));
    }
    Ok(())
}

/// 𝒮_g(x) summed until the tail estimate drops below `tol` or `k_max` terms.
pub fn s_g<T: Real>(x: &ExactReal, params: &SeriesParams<T>, k_max: usize, tol: f64) -> Result<EvalResult<T>> {
    Ok(evaluate(x, params, k_max, tol, false)?.result)
}

pub fn evaluate<T: Real>(
    x: &ExactReal,
    params: &SeriesParams<T>,
    k_max: usize,
    tol: f64,
    keep_trace: bool,
) -> Result<Evaluation<T>> {
    ensure_unit(x)?;
    let prec = params.prec;
    let u = T::unit_roundoff(prec);
    if x.is_zero() {
        let z = real(T::zero());
        return Ok(Evaluation { result: EvalResult::exact(z, 0.0), trace: vec![] });
    }
    let majorant = if params.normally_convergent() { majorant_factor(params.theta_abs(), params.sigma()) } else { None };
    let mut sum = ComplexSum::<T>::new();
    let mut theta_pow = real(T::one());
    let mut trace = Vec::new();
    let mut partials = Vec::new();
    let mut abs_terms = 0.0f64;
    let mut weights = 0.0f64;
    let mut recent_g: Vec<f64> = Vec::new();
    let mut beta_prev = ExactReal::int(1);
    let mut terms = 0usize;
    let mut tail = f64::INFINITY;
    let mut rigorous = false;
    let mut hit_zero = false;

    let mut it = GaussIter::new(x)?;
    while terms < k_max {
        let Some(level) = it.next() else { break };
        if level.alpha.is_zero() {
            hit_zero = true;
            break;
        }
        let j = level.k;
        let g = params.eval_g(&level.alpha, j)?;
        let w = cmul(&theta_pow, &params.pow_s(&beta_prev));
        weights += cabs(&w);
        let term = cmul(&w, &g);
        abs_terms += cabs(&term);
        sum.add(term.clone());
        terms += 1;
        let partial = sum.value();
        partials.push(partial.re.to_f64() + partial.im.to_f64());
        if keep_trace {
            trace.push(TraceRow { j, term, partial, beta_prev: beta_prev.to_real(prec) });
        }
        theta_pow = cmul(&theta_pow, &params.theta);
        // tail from j+1 on: |θ|^{j+1} β_j^σ Σ_i |θ|^i F_{i+1}^{−σ} · sup|g|
        let gabs = cabs(&g);
        recent_g.push(gabs);
        if recent_g.len() > 8 {
            recent_g.remove(0);
        }
        let beta_f = level.beta.to_f64();
        let lead = cabs(&theta_pow) * beta_f.powf(params.sigma());
        match (majorant, params.sup_g) {
            (Some(m), Some(sup)) => {
                tail = lead * m * sup;
                rigorous = true;
            }
            (Some(m), None) => {
                let gs = recent_g.iter().cloned().fold(1.0, f64::max);
                tail = lead * m * 2.0 * gs;
                rigorous = false;
            }
            _ => {
                tail = cabs(&theta_pow) * beta_f.powf(params.sigma()) * gabs.max(1.0) * 4.0;
                rigorous = false;
            }
        }
        beta_prev = level.beta;
        if tail < tol {
            break;
        }
    }
    if !hit_zero && x.kind() == Kind::Rational {
        // the loop may have stopped one level short of α_K = 0
        hit_zero = it.next().map(|l| l.alpha.is_zero()).unwrap_or(false);
    }
    let rounding = sum.rounding_bound(prec) + 8.0 * u * abs_terms + params.g_abs_err * weights;
    let (status, err) = if hit_zero && x.kind() == Kind::Rational {
        (Status::ExactFinite, rounding)
    } else if tail < tol {
        (Status::Converged, tail + rounding)
    } else {
        let v = cauchy_verdict(&partials);
        let st = if v == Status::DivergentSuspected { v } else { Status::Truncated };
        (st, tail + rounding)
    };
    Ok(Evaluation {
        result: EvalResult {
            value: sum.value(),
            abs_error_estimate: err,
            status,
            terms_used: terms,
            rigorous: rigorous || status == Status::ExactFinite,
        },
        trace,
    })
}

/// 𝒮_g(x) − θ x^s 𝒮_g(α(x)) − g(x), with the combined error estimate.
pub fn exact_fe_residual<T: Real>(x: &ExactReal, params: &SeriesParams<T>, k_max: usize, tol: f64) -> Result<(Complex<T>, f64)> {
    if x.is_zero() || x.signum() == std::cmp::Ordering::Less || *x >= ExactReal::int(1) {
        return Err(Error::Domain(format!("{x} is outside (0,1)")));
    }
    let lhs = s_g(x, params, k_max, tol)?;
    let (_, alpha) = x.gauss_step()?;
    let rhs = s_g(&alpha, params, k_max, tol)?;
    let xs = params.pow_s(x);
    let g = params.eval_g(x, 0)?;
    let g_err = params.g_abs_err;
    let scaled = cmul(&cmul(&params.theta, &xs), &rhs.value);
    let res = lhs.value.clone() - scaled - g.clone();
    let u = T::unit_roundoff(params.prec);
    let err = lhs.abs_error_estimate
        + cabs(&params.theta) * cabs(&xs) * rhs.abs_error_estimate
        + 8.0 * u * (cabs(&lhs.value) + cabs(&g) + 1.0)
        + g_err;
    Ok((res, err))
}

#[derive(Clone, Debug)]
pub struct IteratedRemainder<T: Real> {
    pub head: Complex<T>,
    pub scale: Complex<T>,
    pub tail_arg: ExactReal,
    pub head_error: f64,
}

/// 𝒮_g(x) = head + scale·𝒮_g(α_k(x)) with head the first k terms.
pub fn iterated_remainder<T: Real>(x: &ExactReal, params: &SeriesParams<T>, k: usize) -> Result<IteratedRemainder<T>> {
    ensure_unit(x)?;
    let st = cf::expand(x, k)?;
    if st.len() < k {
        return Err(Error::DepthTooSmall { depth: st.len(), needed: k });
    }
    let mut sum = ComplexSum::<T>::new();
    let mut theta_pow = real(T::one());
    let mut weights = 0.0;
    for j in 0..k {
        let g = params.eval_g(st.alpha(j), j)?;
        let w = cmul(&theta_pow, &params.pow_s(&st.beta(j as isize - 1)));
        weights += cabs(&w);
        sum.add(cmul(&w, &g));
        theta_pow = cmul(&theta_pow, &params.theta);
    }
    let scale = cmul(&theta_pow, &params.pow_s(&st.beta(k as isize - 1)));
    Ok(IteratedRemainder {
        head: sum.value(),
        scale,
        tail_arg: st.alpha(k).clone(),
        head_error: sum.rounding_bound(params.prec)
            + 8.0 * T::unit_roundoff(params.prec) * cabs(&sum.value())
            + params.g_abs_err * weights,
    })
}

#[derive(Clone, Debug)]
pub struct JumpData<T: Real> {
    pub r: Rational,
    pub depth: usize,
    pub q: Integer,
    pub value: Complex<T>,
    pub left: Complex<T>,
    pub right: Complex<T>,
    pub jump: Complex<T>,
    /// Side of r on which the cell 𝔠(a_1..a_K) lies.
    pub c_side: Side,
}

/// One-sided limits of 𝒮_g at a rational r, assigned to sides by the parity of K.
pub fn limits_at_rational<T: Real>(r: &Rational, params: &SeriesParams<T>) -> Result<JumpData<T>> {
    let (g0, g1) = match (&params.g0, &params.g1) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(Error::Precondition("g(0) and g(1) must be declared".into())),
    };
    let cells = cf::neighbor_cells(r)?;
    let k = cells.depth;
    let value = s_g(&ExactReal::Rational(r.clone()), params, usize::MAX, 0.0)?.value;
    let q = r.denom().clone();
    let qs = params.pow_s(&ExactReal::Rational(Rational::from((Integer::from(1), q.clone()))));
    let mut theta_k = real(T::one());
    for _ in 0..k {
        theta_k = cmul(&theta_k, &params.theta);
    }
    let tk = cmul(&theta_k, &qs);
    let c_val = value.clone() + cmul(&tk, &g0);
    let cp_val = value.clone() + cmul(&tk, &(g1 + cmul(&params.theta, &g0)));
    let (left, right) = match cells.c_side {
        Side::Left => (c_val, cp_val),
        Side::Right => (cp_val, c_val),
    };
    let jump = right.clone() - left.clone();
    Ok(JumpData { r: r.clone(), depth: k, q, value, left, right, jump, c_side: cells.c_side })
}

/// (lim_{x→0⁺}, lim_{x→1⁻}) = (g(0), g(1) + θ g(0)).
pub fn endpoint_limits<T: Real>(params: &SeriesParams<T>) -> Result<(Complex<T>, Complex<T>)> {
    match (&params.g0, &params.g1) {
        (Some(g0), Some(g1)) => Ok((g0.clone(), g1.clone() + cmul(&params.theta, g0))),
        _ => Err(Error::Precondition("g(0) and g(1) must be declared".into())),
    }
}

#[derive(Clone, Debug)]
pub struct ProbeReport<T: Real> {
    pub status: Status,
    pub trace: Vec<TraceRow<T>>,
}

/// Partial sums up to `k_max` terms and a heuristic verdict; never a proof.
///
/// A rational x with depth > k_max is probed on its first k_max levels, which
/// lets deep rationals stand in for irrationals with prescribed quotients.
pub fn convergence_probe<T: Real>(x: &ExactReal, params: &SeriesParams<T>, k_max: usize) -> Result<ProbeReport<T>> {
    if x.kind() == Kind::Rational && !cf::depth(x)?.exceeds(k_max) {
        let ev = evaluate(x, params, usize::MAX, 0.0, true)?;
        return Ok(ProbeReport { status: Status::ExactFinite, trace: ev.trace });
    }
    let ev = evaluate(x, params, k_max, 0.0, true)?;
    let partials: Vec<f64> = ev.trace.iter().map(|r| r.partial.re.to_f64() + r.partial.im.to_f64()).collect();
    Ok(ProbeReport { status: cauchy_verdict(&partials), trace: ev.trace })
}

/// CSV columns j, term_real, term_imag, partial_real, partial_imag, beta_prev.
pub fn trace_csv<T: Real>(trace: &[TraceRow<T>], digits: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Domain(e.to_string());
    w.write_record(["j", "term_real", "term_imag", "partial_real", "partial_imag", "beta_prev"]).map_err(err)?;
    let d = |t: &T| t.to_bigfloat().to_decimal(Some(digits));
    for r in trace {
        w.write_record([r.j.to_string(), d(&r.term.re), d(&r.term.im), d(&r.partial.re), d(&r.partial.im), d(&r.beta_prev)])
            .map_err(err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Domain(e.to_string()))?).map_err(|e| Error::Domain(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::BigFloat;

    fn wilton(prec: u32) -> SeriesParams<BigFloat> {
        SeriesParams::real(-1.0, 1.0, 1.0, neg_log_g(prec), prec)
    }

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 128)
    }

    #[test]
    fn rational_values_are_exact_finite() {
        let p = wilton(128);
        let r = s_g(&ExactReal::ratio(1, 7), &p, 100, 0.0).unwrap();
        assert_eq!(r.status, Status::ExactFinite);
        let ln7 = BigFloat::from_f64(7.0, 128).ln();
        assert!((r.value.re.clone() - ln7).abs().to_f64() < 1e-35);
        let r = s_g(&ExactReal::ratio(2, 5), &p, 100, 0.0).unwrap();
        let expect = BigFloat::from_f64(2.5, 128).ln() - bf(0.4) * bf(2.0).ln();
        // 0.4 is not dyadic, so compare against an exact 2/5
        let two_fifths = BigFloat::from_rational(&Rational::from((2, 5)), 128);
        let expect2 = BigFloat::from_f64(2.5, 128).ln() - two_fifths * bf(2.0).ln();
        assert!((r.value.re.clone() - expect2).abs().to_f64() < 1e-35);
        assert!((r.value.re.clone() - expect).abs().to_f64() < 1e-15);
        assert_eq!(s_g(&ExactReal::zero(), &p, 10, 0.0).unwrap().value.re.to_f64(), 0.0);
    }

    #[test]
    fn golden_wilton_matches_fixed_point() {
        let p = wilton(128);
        let x = ExactReal::golden();
        let r = s_g(&x, &p, 1000, 1e-30).unwrap();
        assert_eq!(r.status, Status::Converged);
        let xf: BigFloat = x.to_real(128);
        let expect = -xf.ln() / (BigFloat::from_f64(1.0, 128) + xf);
        assert!((r.value.re.clone() - expect).abs().to_f64() < 1e-29);
        assert!(r.value.re.to_decimal(Some(12)).starts_with("0.29740526367"), "{}", r.value.re.to_decimal(Some(12)));
    }

    #[test]
    fn functional_equation_residuals() {
        let p = wilton(128);
        let (res, _) = exact_fe_residual(&ExactReal::ratio(2, 5), &p, 100, 0.0).unwrap();
        assert!(cabs(&res) < 1e-36);
        let (res, err) = exact_fe_residual(&ExactReal::golden(), &p, 1000, 1e-30).unwrap();
        assert!(cabs(&res) < 1e-25 && cabs(&res) < 10.0 * err);
        let (res, _) = exact_fe_residual(&ExactReal::ratio(1, 2), &p, 100, 0.0).unwrap();
        assert!(cabs(&res) < 1e-36);
    }

    #[test]
    fn iterated_remainder_golden() {
        let p = wilton(128);
        let x = ExactReal::golden();
        let it = iterated_remainder(&x, &p, 2).unwrap();
        let xf: BigFloat = x.to_real(128);
        let one = BigFloat::from_f64(1.0, 128);
        let head = -xf.ln() * (one - xf.clone());
        assert!((it.head.re.clone() - head).abs().to_f64() < 1e-35);
        assert!((it.scale.re.clone() - xf.clone() * xf).abs().to_f64() < 1e-36);
        assert_eq!(it.tail_arg, x);
        let z = iterated_remainder(&x, &p, 0).unwrap();
        assert_eq!(z.head.re.to_f64(), 0.0);
        let r = iterated_remainder(&ExactReal::ratio(2, 5), &p, 2).unwrap();
        assert!(r.tail_arg.is_zero());
        assert!(iterated_remainder(&ExactReal::ratio(2, 5), &p, 3).is_err());
    }

    #[test]
    fn majorant_values() {
        let m = majorant_factor(1.0, 1.0).unwrap();
        // Σ 1/F_n, the reciprocal Fibonacci constant
        assert!((m - 3.359885666243178).abs() < 1e-12);
        assert!(majorant_factor(1.7, 1.0).is_none());
        assert!((majorant_factor(0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn limits_need_endpoints() {
        let p = wilton(128);
        assert!(matches!(limits_at_rational(&Rational::from((1, 2)), &p), Err(Error::Precondition(_))));
    }

    #[test]
    fn limits_with_theta_zero_collapse() {
        let g: GFn<f64> = Arc::new(|x: &ExactReal| Ok(real(x.to_f64())));
        let p = SeriesParams::real(0.0, 1.0, 1.0, g, 53).with_endpoints(real(0.0), real(1.0));
        let j = limits_at_rational(&Rational::from((2, 5)), &p).unwrap();
        assert!((j.left.re - 0.4).abs() < 1e-15 && (j.right.re - 0.4).abs() < 1e-15);
    }

    #[test]
    fn verdicts() {
        let conv: Vec<f64> = (1..40).map(|k| 1.0 - 0.5f64.powi(k)).collect();
        assert_eq!(cauchy_verdict(&conv), Status::Converged);
        let osc: Vec<f64> = (0..8).map(|k| if k % 2 == 0 { 0.7 } else { 0.0 }).collect();
        assert_eq!(cauchy_verdict(&osc), Status::DivergentSuspected);
    }

    #[test]
    fn probe_on_golden_converges() {
        let p = SeriesParams::<f64>::real(-1.0, 1.0, 1.0, neg_log_g(53), 53);
        let rep = convergence_probe(&ExactReal::golden(), &p, 60).unwrap();
        assert_eq!(rep.status, Status::Converged);
        let x = ExactReal::golden().to_f64();
        let last = rep.trace.last().unwrap().partial.re;
        assert!((last - (1.0 / x).ln() / (1.0 + x)).abs() < 1e-11);
        let rep = convergence_probe(&ExactReal::ratio(2, 5), &p, 60).unwrap();
        assert_eq!(rep.status, Status::ExactFinite);
        let csv = trace_csv(&rep.trace, 10).unwrap();
        assert_eq!(csv.lines().count(), 3);
    }
}
