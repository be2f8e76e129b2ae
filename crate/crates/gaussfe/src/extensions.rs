//! Divisor-weighted trigonometric sums ψ₁, ψ₂, the Rivoal–Roques series Ψ,
//! and their approximate functional equations.

use std::cmp::Ordering;
use std::sync::Arc;

use rug::Integer;

use crate::afe::{AfeInstance, FFn};
use crate::autocorr::Autocorr;
use crate::cf;
use crate::chowla::{exact_value, FracSeq};
use crate::error::{Error, Result};
use crate::numbers::ExactReal;
use crate::real::{real, CompensatedSum, Real};
use crate::series::{cauchy_verdict, neg_log_g, SeriesParams};
use crate::wilton::{self, CriterionKind, Verdict};

pub const DEFAULT_SIEVE: usize = 10_000_000;

/// τ(n) for n ≤ N.
#[derive(Clone, Debug)]
pub struct DivisorTable {
    tau: Vec<u32>,
}

impl DivisorTable {
    pub fn new(n: usize) -> Self {
        let mut tau = vec![0u32; n + 1];
        for d in 1..=n {
            for m in (d..=n).step_by(d) {
                tau[m] += 1;
            }
        }
        DivisorTable { tau }
    }

    pub fn capacity(&self) -> usize {
        self.tau.len() - 1
    }

    pub fn tau(&self, n: usize) -> u32 {
        self.tau[n]
    }

    fn check(&self, m: u64) -> Result<()> {
        if m as usize > self.capacity() {
            return Err(Error::Capacity { need: m, capacity: self.capacity() as u64 });
        }
        Ok(())
    }
}

/// τ(n) by trial division.
pub fn tau_trial(n: u64) -> u32 {
    let mut c = 0;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            c += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    c
}

fn count(v: &ExactReal) -> Result<u64> {
    let v = exact_value(v);
    if v.signum() == Ordering::Less {
        return Err(Error::Domain(format!("cutoff v = {v} is negative")));
    }
    v.floor_frac().0.to_u64().ok_or_else(|| Error::Domain(format!("cutoff v = {v} is too large")))
}

/// (sin 2πny, cos 2πny) for n = 1..m, with exact reduction of ny mod 1.
fn trig_seq<T: Real>(y: &ExactReal, m: u64, prec: u32) -> impl Iterator<Item = (T, T)> {
    let two_pi = T::from_i64(2, prec) * T::pi(prec);
    FracSeq::<T>::new(y, m, prec).take(m as usize).map(move |f| match f {
        None => (T::zero(), T::one()),
        Some(f) => {
            let a = two_pi.clone() * f;
            (a.sin(), a.cos())
        }
    })
}

/// (Σ_{n≤v} τ(n)/n sin 2πnx, Σ_{n≤v} τ(n)/n cos 2πnx).
pub fn tau_sums<T: Real>(table: &DivisorTable, x: &ExactReal, v: &ExactReal, prec: u32) -> Result<(T, T)> {
    let m = count(v)?;
    table.check(m)?;
    let mut s = CompensatedSum::<T>::new();
    let mut c = CompensatedSum::<T>::new();
    for (n, (sn, cn)) in (1..=m).zip(trig_seq::<T>(x, m, prec)) {
        let w = T::from_f64_prec(table.tau(n as usize) as f64, prec) / T::from_f64_prec(n as f64, prec);
        s.add(w.clone() * sn);
        c.add(w * cn);
    }
    Ok((s.value(), c.value()))
}

/// ψ₁(x, v) = −(1/π) Σ_{n≤v} τ(n)/n sin 2πnx.
pub fn psi1_partial<T: Real>(table: &DivisorTable, x: &ExactReal, v: &ExactReal, prec: u32) -> Result<T> {
    Ok(-tau_sums::<T>(table, x, v, prec)?.0 / T::pi(prec))
}

/// ψ₂(x, v) = Σ_{n≤v} τ(n)/n cos 2πnx.
pub fn psi2_partial<T: Real>(table: &DivisorTable, x: &ExactReal, v: &ExactReal, prec: u32) -> Result<T> {
    Ok(tau_sums::<T>(table, x, v, prec)?.1)
}

/// Σ_{m≤v} (1/m) Σ_{k≤v/m} sin(2πkmx)/k, the same sine sum grouped by factor pairs.
pub fn walfisz_sin<T: Real>(x: &ExactReal, v: &ExactReal, prec: u32) -> Result<T> {
    let m = count(v)?;
    let sines: Vec<T> = trig_seq::<T>(x, m, prec).map(|(s, _)| s).collect();
    let mut outer = CompensatedSum::<T>::new();
    for a in 1..=m {
        let mut inner = CompensatedSum::<T>::new();
        for k in 1..=m / a {
            inner.add(sines[(a * k - 1) as usize].clone() / T::from_f64_prec(k as f64, prec));
        }
        outer.add(inner.value() / T::from_f64_prec(a as f64, prec));
    }
    Ok(outer.value())
}

/// sup_{1≤n≤v} |Σ_{m≤n} τ(m)/m sin 2πmx| / (1 + log n).
pub fn growth_statistic(table: &DivisorTable, x: &ExactReal, v: u64) -> Result<f64> {
    table.check(v)?;
    let mut s = CompensatedSum::<f64>::new();
    let mut sup = 0.0f64;
    for (n, (sn, _)) in (1..=v).zip(trig_seq::<f64>(x, v, 53)) {
        s.add(table.tau(n as usize) as f64 / n as f64 * sn);
        sup = sup.max(s.value().abs() / (1.0 + (n as f64).ln()));
    }
    Ok(sup)
}

/// Residual Σ_{n≤v} τ(n)/n sin 2πnx + x Σ_{n≤x²v} τ(n)/n sin(2πn/x) − (π/2)log(1/x) + πF(x),
/// which is O((x²v)^{−1/5}).
pub fn efa_residual_psi1<T: Real>(ctx: &Arc<Autocorr<T>>, table: &DivisorTable, x: &ExactReal, v: &ExactReal) -> Result<T> {
    let prec = ctx.prec;
    let x = exact_value(x);
    if x.signum() != Ordering::Greater || x > ExactReal::int(1) {
        return Err(Error::Domain(format!("x = {x} must lie in (0,1]")));
    }
    let x2v = x.mul(&x)?.mul(v)?;
    if x2v < ExactReal::int(1) {
        return Err(Error::Domain("x²v must be at least 1".into()));
    }
    let s1 = tau_sums::<T>(table, &x, v, prec)?.0;
    let s2 = tau_sums::<T>(table, &x.invert()?, &x2v, prec)?.0;
    let xt: T = x.to_real(prec);
    let pi = T::pi(prec);
    let log_inv = if x == ExactReal::int(1) { T::zero() } else { x.neg_log::<T>(prec) };
    let f = ctx.f(&x)?.0;
    Ok(s1 + xt * s2 - pi.clone() * T::from_f64_prec(0.5, prec) * log_inv + pi * f)
}

/// h(x,v) = (2/π)Σ_{n≤v} τ(n)/n sin 2πnx + 2G(x), with θ = −1, s = 1, a = 2, g = log(1/x).
pub fn psi1_instance<T: Real>(ctx: &Arc<Autocorr<T>>, table: Arc<DivisorTable>, k_max: usize) -> AfeInstance<T> {
    let prec = ctx.prec;
    let c = Arc::clone(ctx);
    let f: FFn<T> = Arc::new(move |x: &ExactReal, v: &ExactReal| {
        let s = tau_sums::<T>(&table, x, v, prec)?.0;
        let g = c.g(x, k_max, c.tol)?.value.re;
        let two = T::from_i64(2, prec);
        Ok(real(two.clone() * s / T::pi(prec) + two * g))
    });
    let params = SeriesParams::real(-1.0, 1.0, 2.0, neg_log_g(prec), prec);
    AfeInstance::new("psi1", params, f).with_z0(real(T::zero()))
}

/// sin(2πn²x)cot(πnx)/n² summed over n ≤ v; a pole at the first n with nx ∈ ℤ.
pub fn rr_psi_partial<T: Real>(x: &ExactReal, v: &ExactReal, prec: u32) -> Result<T> {
    let m = count(v)?;
    let x = exact_value(x);
    let pi = T::pi(prec);
    let two = T::from_i64(2, prec);
    let mut acc = CompensatedSum::<T>::new();
    for n in 1..=m {
        let nx = x.affine(&Integer::from(n), &Integer::new());
        if nx.is_integer() {
            return Err(Error::Pole { n });
        }
        let n2x = x.affine(&Integer::from(Integer::u_pow_u(n as u32, 2)), &Integer::new());
        let t1: T = nx.frac().to_real(prec);
        let t2: T = n2x.frac().to_real(prec);
        let a = pi.clone() * t1;
        let cot = a.cos() / a.sin();
        let n2 = T::from_f64_prec((n * n) as f64, prec);
        acc.add((two.clone() * pi.clone() * t2).sin() * cot / n2);
    }
    Ok(acc.value())
}

/// (sin(2πt)cot(πt), 2cos²(πt)).
pub fn rr_term_identity(t: f64) -> (f64, f64) {
    let p = std::f64::consts::PI * t;
    ((2.0 * p).sin() * p.cos() / p.sin(), 2.0 * p.cos() * p.cos())
}

/// Partial sums along a cutoff schedule with a heuristic verdict.
pub fn rr_convergence(x: &ExactReal, schedule: &[ExactReal], prec: u32) -> Result<(Vec<f64>, Verdict)> {
    let parts: Vec<f64> = schedule.iter().map(|v| rr_psi_partial::<f64>(x, v, prec)).collect::<Result<_>>()?;
    let verdict = cauchy_verdict(&parts).into();
    Ok((parts, verdict))
}

#[derive(Clone, Debug)]
pub struct Log2Comparison {
    /// Partial sums of Σ β_{k−1} log²(1/α_k).
    pub series_partials: Vec<f64>,
    pub series_verdict: Verdict,
    pub criterion_verdict: Verdict,
}

/// Σ β_{k−1}log²(1/α_k) against Σ log²(q_{k+1})/q_k over the first k_max levels.
pub fn log2_criterion(x: &ExactReal, k_max: usize) -> Result<Log2Comparison> {
    let st = cf::expand(&exact_value(x).frac(), k_max)?;
    let n = k_max.min(st.len());
    let mut partials = Vec::with_capacity(n);
    let mut acc = 0.0;
    for k in 0..n {
        let a = st.alpha(k);
        if a.is_zero() {
            break;
        }
        let b = st.beta(k as isize - 1).to_f64();
        let l = log_inv(a);
        acc += b * l * l;
        partials.push(acc);
    }
    let series_verdict = if partials.is_empty() { Verdict::Exhausted } else { cauchy_verdict(&partials).into() };
    let criterion_verdict = wilton::criterion(x, k_max, CriterionKind::LogSquared)?.verdict;
    Ok(Log2Comparison { series_partials: partials, series_verdict, criterion_verdict })
}

/// log(1/a) for 0 < a < 1 of any size.
fn log_inv(a: &ExactReal) -> f64 {
    let f = a.to_float(64);
    let e = f.inner().get_exp().unwrap_or(0);
    let m = f.inner().clone() >> e;
    -(m.to_f64().ln() + e as f64 * std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::BigFloat;

    #[test]
    fn sieve_matches_trial_division() {
        let t = DivisorTable::new(10_000);
        for n in 1..=10_000u64 {
            assert_eq!(t.tau(n as usize), tau_trial(n));
        }
        assert_eq!(t.tau(9973), 2);
    }

    #[test]
    fn psi1_vanishes_at_half() {
        let t = DivisorTable::new(1000);
        for v in [1, 10, 999] {
            assert!(psi1_partial::<f64>(&t, &ExactReal::ratio(1, 2), &ExactReal::int(v), 53).unwrap().abs() < 1e-13);
        }
        assert!(matches!(
            psi1_partial::<f64>(&t, &ExactReal::ratio(1, 3), &ExactReal::int(1001), 53),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn walfisz_form_agrees() {
        let t = DivisorTable::new(5000);
        for x in [ExactReal::golden(), ExactReal::ratio(3, 7), ExactReal::ratio(1234567, 10000000)] {
            let v = ExactReal::ratio(9001, 2);
            let a = tau_sums::<BigFloat>(&t, &x, &v, 128).unwrap().0;
            let b = walfisz_sin::<BigFloat>(&x, &v, 128).unwrap();
            assert!((a - b).abs().to_f64() < 1e-30);
        }
    }

    #[test]
    fn growth_is_logarithmic() {
        let t = DivisorTable::new(100_000);
        let s = growth_statistic(&t, &ExactReal::golden(), 100_000).unwrap();
        assert!(s < 5.0, "{s}");
    }

    #[test]
    fn rr_terms_and_poles() {
        let (a, b) = rr_term_identity(0.3);
        assert!((a - b).abs() < 1e-15);
        assert_eq!(rr_psi_partial::<f64>(&ExactReal::ratio(2, 7), &ExactReal::int(10), 53), Err(Error::Pole { n: 7 }));
        let (_, verdict) = rr_convergence(&ExactReal::golden(), &crate::afe::geometric_schedule(1000, 6), 53).unwrap();
        assert_eq!(verdict, Verdict::Converging);
    }

    #[test]
    fn log2_criterion_witnesses() {
        let g = log2_criterion(&ExactReal::golden(), 40).unwrap();
        assert_eq!(g.series_verdict, Verdict::Converging);
        assert_eq!(g.criterion_verdict, Verdict::Converging);
        let t = log2_criterion(&wilton::witnesses::tower(), wilton::witnesses::TOWER_LEVELS).unwrap();
        assert_eq!(t.series_verdict, Verdict::DivergingSuspected);
        assert_eq!(t.criterion_verdict, Verdict::DivergingSuspected);
    }

    #[test]
    fn psi1_residual_and_identity() {
        let ctx = Autocorr::<f64>::new(53, 1e-11);
        let t = DivisorTable::new(200_000);
        let x = ExactReal::golden();
        let r1 = efa_residual_psi1(&ctx, &t, &x, &ExactReal::int(2_000)).unwrap();
        let r2 = efa_residual_psi1(&ctx, &t, &x, &ExactReal::int(200_000)).unwrap();
        assert!(r2.abs() < r1.abs().max(1e-3), "{r1} {r2}");
    }

    #[test]
    fn psi1_residual_decays() {
        let ctx = Autocorr::<f64>::new(53, 1e-11);
        let t = DivisorTable::new(600_000);
        for x in [ExactReal::golden(), ExactReal::silver()] {
            let pts: Vec<(f64, f64)> = crate::afe::geometric_schedule(1000, 10)
                .iter()
                .map(|v| (v.to_f64().ln(), efa_residual_psi1(&ctx, &t, &x, v).unwrap().abs().ln()))
                .collect();
            let n = pts.len() as f64;
            let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (u, w)| (a + u / n, b + w / n));
            let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (u, w)| (a + (u - mx) * (w - my), b + (u - mx) * (u - mx)));
            let slope = sxy / sxx;
            assert!(slope <= -0.1, "x = {x}: slope {slope}");
        }
    }
}
