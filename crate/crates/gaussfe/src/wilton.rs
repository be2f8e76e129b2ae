//! Wilton 𝒲, Brjuno Φ, the log² series Φ₂, and their q_k criteria.

use std::fmt;
use std::sync::Arc;

use rug::Integer;

use crate::cf;
use crate::error::{Error, Result};
use crate::numbers::{ExactReal, Kind};
use crate::real::{real, Real};
use crate::series::{self, cauchy_verdict, neg_log_g, EvalResult, GFn, SeriesParams, Status};

pub fn wilton_params<T: Real>(prec: u32) -> SeriesParams<T> {
    SeriesParams::real(-1.0, 1.0, 1.0, neg_log_g(prec), prec)
}

pub fn brjuno_params<T: Real>(prec: u32) -> SeriesParams<T> {
    SeriesParams::real(1.0, 1.0, 1.0, neg_log_g(prec), prec)
}

/// v(x) = ½log²(1/x) + (γ − log 2π) log(1/x).
pub fn v_log2<T: Real>(prec: u32) -> GFn<T> {
    let c = T::euler_gamma(prec) - (T::from_i64(2, prec) * T::pi(prec)).ln();
    Arc::new(move |x: &ExactReal| {
        if x.signum() != std::cmp::Ordering::Greater {
            return Err(Error::Domain(format!("log(1/x) at x = {x}")));
        }
        let l: T = x.neg_log(prec);
        let half = T::from_f64_prec(0.5, prec);
        Ok(real(half * l.clone() * l.clone() + c.clone() * l))
    })
}

pub fn phi2_params<T: Real>(prec: u32) -> SeriesParams<T> {
    SeriesParams::real(1.0, 1.0, 1.0, v_log2(prec), prec)
}

/// 𝒲(x) for any real x, reduced mod 1.
pub fn wilton<T: Real>(x: &ExactReal, k_max: usize, tol: f64, prec: u32) -> Result<EvalResult<T>> {
    series::s_g(&x.frac(), &wilton_params(prec), k_max, tol)
}

/// Φ(x) for any real x, reduced mod 1.
pub fn brjuno<T: Real>(x: &ExactReal, k_max: usize, tol: f64, prec: u32) -> Result<EvalResult<T>> {
    series::s_g(&x.frac(), &brjuno_params(prec), k_max, tol)
}

#[derive(Clone, Debug)]
pub struct Phi2Result<T: Real> {
    pub result: EvalResult<T>,
    /// Set for rational inputs: the sum is finite but the criterion concerns irrationals.
    pub rational_input: bool,
}

pub fn phi2<T: Real>(x: &ExactReal, k_max: usize, tol: f64, prec: u32) -> Result<Phi2Result<T>> {
    let x = x.frac();
    let result = series::s_g(&x, &phi2_params(prec), k_max, tol)?;
    Ok(Phi2Result { result, rational_input: x.kind() == Kind::Rational && !x.is_zero() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionKind {
    /// (−1)^k log q_{k+1}/q_k
    Wilton,
    /// log q_{k+1}/q_k
    Brjuno,
    /// log² q_{k+1}/q_k
    LogSquared,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Converging,
    DivergingSuspected,
    Exhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Converging => "converging",
            Verdict::DivergingSuspected => "diverging-suspected",
            Verdict::Exhausted => "exhausted",
        })
    }
}

impl From<Status> for Verdict {
    fn from(s: Status) -> Self {
        match s {
            Status::Converged | Status::ExactFinite => Verdict::Converging,
            Status::DivergentSuspected => Verdict::DivergingSuspected,
            Status::Truncated => Verdict::Exhausted,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionTrace {
    pub kind: CriterionKind,
    /// (k, term) with the sign already applied.
    pub terms: Vec<(usize, f64)>,
    pub partials: Vec<f64>,
    pub verdict: Verdict,
}

/// log q as f64 for integers of any size.
fn ln_int(q: &Integer) -> f64 {
    let bits = q.significant_bits();
    if bits < 1000 {
        return q.to_f64().ln();
    }
    let shift = bits - 64;
    let top = Integer::from(q >> shift).to_f64();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn criterion(x: &ExactReal, k_max: usize, kind: CriterionKind) -> Result<CriterionTrace> {
    let st = cf::expand(&x.frac(), k_max.saturating_add(1))?;
    let n = k_max.min(st.len());
    let mut terms = Vec::with_capacity(n);
    let mut partials = Vec::with_capacity(n);
    let mut acc = 0.0;
    for k in 0..n {
        let lq1 = ln_int(&st.q(k as isize + 1));
        let qk = ln_int(&st.q(k as isize)).exp();
        let t = match kind {
            CriterionKind::Wilton => {
                if k % 2 == 0 {
                    lq1 / qk
                } else {
                    -lq1 / qk
                }
            }
            CriterionKind::Brjuno => lq1 / qk,
            CriterionKind::LogSquared => lq1 * lq1 / qk,
        };
        acc += t;
        terms.push((k, t));
        partials.push(acc);
    }
    let verdict = if n == 0 { Verdict::Exhausted } else { cauchy_verdict(&partials).into() };
    Ok(CriterionTrace { kind, terms, partials, verdict })
}

pub fn wilton_criterion(x: &ExactReal, k_max: usize) -> Result<CriterionTrace> {
    criterion(x, k_max, CriterionKind::Wilton)
}

pub fn brjuno_criterion(x: &ExactReal, k_max: usize) -> Result<CriterionTrace> {
    criterion(x, k_max, CriterionKind::Brjuno)
}

/// Named test points with prescribed partial quotients.
pub mod witnesses {
    use super::*;

    /// [0; 1, 2, …, depth], a finite stand-in for the e-like schedule a_k = k.
    pub fn e_like(depth: usize) -> ExactReal {
        let q: Vec<Integer> = (1..=depth.max(2)).map(Integer::from).collect();
        ExactReal::Rational(cf::value_of(&q).expect("positive quotients"))
    }

    /// [0; 2, 4, 512, 2^4610, 2]: a_{k+1} = 2^{q_k} for k < 4, then a closing 2.
    /// The next quotient would be 2^{q_4} with q_4 > 2^4610, so four levels is
    /// all that is representable; each criterion term there is ≈ log 2.
    pub fn tower() -> ExactReal {
        let mut quot = Vec::new();
        let (mut q0, mut q1) = (Integer::new(), Integer::from(1));
        for _ in 0..4 {
            let a = Integer::from(1) << q1.to_u32().expect("small exponent");
            let q2 = Integer::from(&a * &q1) + &q0;
            quot.push(a);
            q0 = std::mem::replace(&mut q1, q2);
        }
        quot.push(Integer::from(2));
        ExactReal::Rational(cf::value_of(&quot).expect("positive quotients"))
    }

    /// Levels of `tower()` that behave like the infinite witness.
    pub const TOWER_LEVELS: usize = 4;
    pub const E_LIKE_DEPTH: usize = 60;
    pub const E_LIKE_LEVELS: usize = 40;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::BigFloat;

    #[test]
    fn wilton_at_reciprocals() {
        for k in [2i64, 7, 100] {
            let w: EvalResult<BigFloat> = wilton(&ExactReal::ratio(1, k), 100, 0.0, 128).unwrap();
            let lk = BigFloat::from_f64(k as f64, 128).ln();
            assert!((w.value.re.clone() - lk).abs().to_f64() < 1e-35);
        }
        let w: EvalResult<f64> = wilton(&ExactReal::zero(), 10, 0.0, 53).unwrap();
        assert_eq!(w.value.re, 0.0);
        // periodic extension
        let a: EvalResult<f64> = wilton(&ExactReal::ratio(8, 7), 100, 0.0, 53).unwrap();
        assert!((a.value.re - 7f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn brjuno_golden_and_two_fifths() {
        let x = ExactReal::golden();
        let b: EvalResult<BigFloat> = brjuno(&x, 2000, 1e-30, 128).unwrap();
        let xf: BigFloat = x.to_real(128);
        let expect = -xf.ln() / (BigFloat::from_f64(1.0, 128) - xf);
        assert!((b.value.re.clone() - expect).abs().to_f64() < 1e-28);
        let r: EvalResult<f64> = brjuno(&ExactReal::ratio(2, 5), 10, 0.0, 53).unwrap();
        assert!((r.value.re - (2.5f64.ln() + 0.4 * 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn phi2_values() {
        let r: Phi2Result<BigFloat> = phi2(&ExactReal::ratio(1, 2), 10, 0.0, 128).unwrap();
        assert!(r.rational_input);
        let l2 = std::f64::consts::LN_2;
        let c = 0.5772156649015329 - (2.0 * std::f64::consts::PI).ln();
        assert!((r.result.value.re.to_f64() - (0.5 * l2 * l2 + c * l2)).abs() < 1e-15);
        let x = ExactReal::golden();
        let r: Phi2Result<f64> = phi2(&x, 200, 1e-14, 53).unwrap();
        let xf = x.to_f64();
        let l = (1.0 / xf).ln();
        assert!((r.result.value.re - (0.5 * l * l + c * l) / (1.0 - xf)).abs() < 1e-12);
        assert!(!r.rational_input);
    }

    #[test]
    fn criteria() {
        let g = wilton_criterion(&ExactReal::golden(), 40).unwrap();
        assert_eq!(g.verdict, Verdict::Converging);
        assert!((g.terms[0].1 - 0.0).abs() < 1e-15 && (g.terms[1].1 + 2f64.ln()).abs() < 1e-15);
        let t = wilton_criterion(&witnesses::tower(), witnesses::TOWER_LEVELS).unwrap();
        assert_eq!(t.verdict, Verdict::DivergingSuspected);
        assert!((t.terms[3].1.abs() - 2f64.ln()).abs() < 0.01);
        let e = brjuno_criterion(&witnesses::e_like(witnesses::E_LIKE_DEPTH), witnesses::E_LIKE_LEVELS).unwrap();
        assert_eq!(e.verdict, Verdict::Converging);
        assert_eq!(wilton_criterion(&ExactReal::golden(), 0).unwrap().verdict, Verdict::Exhausted);
    }

    #[test]
    fn tower_quotients() {
        let st = cf::expand(&witnesses::tower(), 10).unwrap();
        assert_eq!(st.len(), 5);
        assert_eq!(*st.a(3), 512);
        assert_eq!(st.q(3), 4610);
        assert_eq!(st.a(4).significant_bits(), 4611);
    }
}
