//! Iteration of approximate functional equations
//! f(x,v) − θx^s f(α(x), x^a v) = g(x) + ε(x,v) down the Gauss orbit.

use std::sync::Arc;

use num_complex::Complex;
use rug::{Integer, Rational};

use crate::autocorr::Autocorr;
use crate::cf::{self, GaussIter};
use crate::chowla::{self, exact_value};
use crate::error::{Error, Result};
use crate::numbers::{BigFloat, ExactReal, Kind};
use crate::real::{cabs, cmul, real, ComplexSum, Real};
use crate::series::{self, cauchy_verdict, EvalResult, SeriesParams, Status};
use crate::wilton;

/// f(x, v) for x ∈ [0,1) and v > 0.
pub type FFn<T> = Arc<dyn Fn(&ExactReal, &ExactReal) -> Result<Complex<T>> + Send + Sync>;

#[derive(Clone)]
pub struct AfeInstance<T: Real> {
    pub params: SeriesParams<T>,
    pub f: FFn<T>,
    pub label: String,
    /// Declared value of lim_{v→∞} f(0, v), if any.
    pub z0: Option<Complex<T>>,
}

impl<T: Real> AfeInstance<T> {
    pub fn new(label: &str, params: SeriesParams<T>, f: FFn<T>) -> Self {
        AfeInstance { params, f, label: label.to_string(), z0: None }
    }

    pub fn with_z0(mut self, z0: Complex<T>) -> Self {
        self.z0 = Some(z0);
        self
    }

    fn eval(&self, x: &ExactReal, v: &ExactReal, j: usize) -> Result<Complex<T>> {
        (self.f)(x, v).map_err(|e| Error::at_level(j, e))
    }

    /// ε(x,v) = f(x,v) − θx^s f(α(x), x^a v) − g(x) for 0 < x < 1.
    pub fn measured_eps(&self, x: &ExactReal, v: &ExactReal) -> Result<Complex<T>> {
        let p = &self.params;
        let f0 = self.eval(x, v, 0)?;
        let (_, ax) = x.gauss_step()?;
        let f1 = self.eval(&ax, &scale_cutoff(x, v, p.a, p.prec)?, 1)?;
        let g = (p.g)(x)?;
        Ok(f0 - cmul(&cmul(&p.theta, &p.pow_s(x)), &f1) - g)
    }
}

/// b^a·v, exact when a is 1 or 2.
pub fn scale_cutoff(b: &ExactReal, v: &ExactReal, a: f64, prec: u32) -> Result<ExactReal> {
    if a == 1.0 {
        b.mul(v)
    } else if a == 2.0 {
        b.mul(b)?.mul(v)
    } else {
        let w = prec.max(64) + 64;
        let bt: BigFloat = b.to_real(w);
        let vt: BigFloat = v.to_real(w);
        let e = BigFloat::from_f64(a, w);
        Ok(ExactReal::Float(bt.powf(&e) * vt))
    }
}

/// The unique K with β_{K−1}^a v ≥ 1 > β_K^a v.
pub fn cutoff_k(x: &ExactReal, v: &ExactReal, a: f64) -> Result<usize> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Domain("a must be positive".into()));
    }
    let one = ExactReal::int(1);
    if *v < one {
        return Err(Error::Domain(format!("v = {v} is below 1; no level satisfies the bracket")));
    }
    let x = exact_value(x);
    let mut it = GaussIter::new(&x)?;
    for lvl in it.by_ref() {
        if scale_cutoff(&lvl.beta, v, a, 128)? < one {
            return Ok(lvl.k);
        }
    }
    Err(Error::Precondition("orbit ended before the bracket closed".into()))
}

#[derive(Clone, Debug)]
pub struct IterationRow<T: Real> {
    pub j: usize,
    pub alpha: ExactReal,
    pub beta_prev: ExactReal,
    pub v: ExactReal,
    /// θ^j β_{j−1}^s g(α_j).
    pub g_term: Complex<T>,
    /// ε measured at (α_j, v_j).
    pub eps: Complex<T>,
    /// lhs_j − Σ_{i≤j} θ^i β_{i−1}^s (g + ε) with lhs_j = f_0 − θ^{j+1}β_j^s f_{j+1}.
    pub partial_reassembly: Complex<T>,
}

#[derive(Clone, Debug)]
pub struct IterationTrace<T: Real> {
    pub rows: Vec<IterationRow<T>>,
    pub lhs: Complex<T>,
    pub residual: Complex<T>,
}

/// Runs k steps of the iteration and checks the reassembled identity.
pub fn iterate<T: Real>(inst: &AfeInstance<T>, x: &ExactReal, v: &ExactReal, k: usize) -> Result<IterationTrace<T>> {
    let p = &inst.params;
    let x = exact_value(x);
    let st = cf::expand(&x, k)?;
    if st.len() < k {
        return Err(Error::DepthTooSmall { depth: st.len(), needed: k });
    }
    let mut vs = Vec::with_capacity(k + 1);
    let mut fs = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let vj = scale_cutoff(&st.beta(j as isize - 1), v, p.a, p.prec)?;
        fs.push(inst.eval(st.alpha(j), &vj, j)?);
        vs.push(vj);
    }
    let mut weight = real(T::one());
    let mut rhs = ComplexSum::<T>::new();
    let mut rows = Vec::with_capacity(k);
    for j in 0..k {
        let aj = st.alpha(j);
        let g = (p.g)(aj).map_err(|e| Error::at_level(j, e))?;
        let eps = fs[j].clone() - cmul(&cmul(&p.theta, &p.pow_s(aj)), &fs[j + 1]) - g.clone();
        let w = cmul(&weight, &p.pow_s(&st.beta(j as isize - 1)));
        let g_term = cmul(&w, &g);
        rhs.add(g_term.clone());
        rhs.add(cmul(&w, &eps));
        let w_next = cmul(&cmul(&weight, &p.theta), &p.pow_s(&st.beta(j as isize)));
        let lhs_j = fs[0].clone() - cmul(&w_next, &fs[j + 1]);
        rows.push(IterationRow {
            j,
            alpha: aj.clone(),
            beta_prev: st.beta(j as isize - 1),
            v: vs[j].clone(),
            g_term,
            eps,
            partial_reassembly: lhs_j - rhs.value(),
        });
        weight = cmul(&weight, &p.theta);
    }
    let lhs = fs[0].clone() - cmul(&cmul(&weight, &p.pow_s(&st.beta(k as isize - 1))), &fs[k]);
    let residual = lhs.clone() - rhs.value();
    Ok(IterationTrace { rows, lhs, residual })
}

/// CSV columns j, alpha_j, beta_{j-1}, v_j, g_term, eps_measured, partial_reassembly.
pub fn trace_csv<T: Real>(trace: &IterationTrace<T>, digits: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Domain(e.to_string());
    w.write_record(["j", "alpha_j", "beta_{j-1}", "v_j", "g_term", "eps_measured", "partial_reassembly"]).map_err(err)?;
    for r in &trace.rows {
        let d = |x: &ExactReal| x.to_float(128).to_decimal(Some(digits));
        w.write_record([
            r.j.to_string(),
            d(&r.alpha),
            d(&r.beta_prev),
            d(&r.v),
            series::fmt_complex(&r.g_term, digits),
            series::fmt_complex(&r.eps, digits),
            format!("{:.3e}", cabs(&r.partial_reassembly)),
        ])
        .map_err(err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Domain(e.to_string()))?).map_err(|e| Error::Domain(e.to_string()))
}

/// Finite-sample statistics for the four hypotheses; nothing here is a proof.
#[derive(Clone, Debug, Default)]
pub struct HypothesisReport {
    /// sup |ε| over grid points with x^a v ≥ 1.
    pub sup_eps: f64,
    /// sup |ε|·x^a v over the same points.
    pub sup_eps_scaled: f64,
    /// sup |f(x,1)|.
    pub sup_f_at_1: f64,
    /// sup |f(x,v)|/(1 + |g(x)|) over points with x^a v < 1.
    pub sup_f_ratio: f64,
    pub points: usize,
    /// Statistics exceeding the declared constants.
    pub violations: Vec<String>,
}

/// Constants the user expects the statistics to stay under.
#[derive(Clone, Copy, Debug)]
pub struct Declared {
    pub eps: f64,
    pub f_at_1: f64,
    pub f_ratio: f64,
}

pub fn hypothesis_probe<T: Real>(
    inst: &AfeInstance<T>,
    grid: &[(ExactReal, ExactReal)],
    declared: Option<Declared>,
) -> Result<HypothesisReport> {
    let p = &inst.params;
    let mut rep = HypothesisReport::default();
    let one = ExactReal::int(1);
    for (x, v) in grid {
        let x = exact_value(x);
        if x.signum() != std::cmp::Ordering::Greater || x >= one {
            continue;
        }
        rep.points += 1;
        let xav = scale_cutoff(&x, v, p.a, p.prec)?;
        rep.sup_f_at_1 = rep.sup_f_at_1.max(cabs(&inst.eval(&x, &one, 0)?));
        if xav >= one {
            let e = cabs(&inst.measured_eps(&x, v)?);
            rep.sup_eps = rep.sup_eps.max(e);
            rep.sup_eps_scaled = rep.sup_eps_scaled.max(e * xav.to_f64());
        } else {
            let g = cabs(&(p.g)(&x)?);
            rep.sup_f_ratio = rep.sup_f_ratio.max(cabs(&inst.eval(&x, v, 0)?) / (1.0 + g));
        }
    }
    if let Some(d) = declared {
        for (name, got, cap) in [
            ("ε on x^a v ≥ 1", rep.sup_eps, d.eps),
            ("f(x,1)", rep.sup_f_at_1, d.f_at_1),
            ("f/(1+|g|) on x^a v < 1", rep.sup_f_ratio, d.f_ratio),
        ] {
            if got > cap {
                rep.violations.push(format!("{name}: {got:.4e} > {cap:.4e}"));
            }
        }
    }
    Ok(rep)
}

/// Least-squares slope of log|ε(x,v)| against log v.
pub fn decay_slope<T: Real>(inst: &AfeInstance<T>, x: &ExactReal, vs: &[ExactReal]) -> Result<f64> {
    let mut pts = Vec::with_capacity(vs.len());
    for v in vs {
        let e = cabs(&inst.measured_eps(x, v)?);
        if e > 0.0 {
            pts.push((v.to_f64().ln(), e.ln()));
        }
    }
    if pts.len() < 2 {
        return Err(Error::Precondition("need two nonzero ε samples".into()));
    }
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    Ok(sxy / sxx)
}

/// v₀·2^i for i < n.
pub fn geometric_schedule(v0: i64, n: usize) -> Vec<ExactReal> {
    (0..n).map(|i| ExactReal::Rational(Rational::from(Integer::from(v0) << i as u32))).collect()
}

#[derive(Clone, Debug)]
pub enum AfeLimit<T: Real> {
    Compared {
        /// f(x, v) along the schedule.
        values: Vec<Complex<T>>,
        status: Status,
        /// 𝒮_g(x), plus θ^K z₀ q^{−s} at a rational.
        predicted: EvalResult<T>,
        gap: f64,
    },
    /// f(0, v) has no limit, so f(x, v) has none at any rational x.
    NoLimitAtRationals,
}

pub fn converge_via_afe<T: Real>(
    inst: &AfeInstance<T>,
    x: &ExactReal,
    schedule: &[ExactReal],
    k_max: usize,
    tol: f64,
) -> Result<AfeLimit<T>> {
    let p = &inst.params;
    let x = exact_value(x);
    let mut predicted = series::s_g(&x, p, k_max, tol)?;
    if x.kind() == Kind::Rational && !x.is_zero() {
        let z0 = match &inst.z0 {
            Some(z) => z.clone(),
            None => {
                let f0: Vec<Complex<T>> = schedule.iter().map(|v| inst.eval(&ExactReal::zero(), v, 0)).collect::<Result<_>>()?;
                let parts: Vec<f64> = f0.iter().map(|z| z.re.to_f64() + z.im.to_f64()).collect();
                if cauchy_verdict(&parts) == Status::DivergentSuspected {
                    return Ok(AfeLimit::NoLimitAtRationals);
                }
                f0.last().cloned().unwrap_or_else(|| real(T::zero()))
            }
        };
        let r = x.as_rational().unwrap_or_default();
        let k = cf::neighbor_cells(&r)?.depth;
        let mut tk = real(T::one());
        for _ in 0..k {
            tk = cmul(&tk, &p.theta);
        }
        let qs = p.pow_s(&ExactReal::Rational(Rational::from((Integer::from(1), r.denom().clone()))));
        predicted.value = predicted.value + cmul(&cmul(&tk, &qs), &z0);
    }
    let values: Vec<Complex<T>> = schedule.iter().map(|v| inst.eval(&x, v, 0)).collect::<Result<_>>()?;
    let parts: Vec<f64> = values.iter().map(|z| z.re.to_f64() + z.im.to_f64()).collect();
    let status = if values.is_empty() { Status::Truncated } else { cauchy_verdict(&parts) };
    let gap = values.last().map(|z| cabs(&(z.clone() - predicted.value.clone()))).unwrap_or(f64::INFINITY);
    Ok(AfeLimit::Compared { values, status, predicted, gap })
}

/// f = 𝒮_g with ε ≡ 0.
pub fn exact_instance<T: Real>(params: SeriesParams<T>, k_max: usize, tol: f64) -> AfeInstance<T> {
    let p = params.clone();
    let f: FFn<T> = Arc::new(move |x: &ExactReal, _v: &ExactReal| Ok(series::s_g(x, &p, k_max, tol)?.value));
    AfeInstance::new("exact", params, f)
}

/// f(x,v) = −2Σ_{m≤v} B₁(mx)/m + 2G(x) with θ = −1, s = 1, a = 1, g = log(1/x).
pub fn chowla_instance<T: Real>(ctx: &Arc<Autocorr<T>>, k_max: usize) -> AfeInstance<T> {
    let prec = ctx.prec;
    let c = Arc::clone(ctx);
    let f: FFn<T> = Arc::new(move |x: &ExactReal, v: &ExactReal| {
        let s = chowla::phi1_partial::<T>(x, v, prec)?.sum;
        let g = c.g(x, k_max, c.tol)?.value.re;
        let two = T::from_i64(2, prec);
        Ok(real(two.clone() * g - two * s))
    });
    AfeInstance::new("chowla", wilton::wilton_params(prec), f).with_z0(real(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_examples() {
        let g = ExactReal::golden();
        assert_eq!(cutoff_k(&g, &ExactReal::int(10), 1.0).unwrap(), 4);
        assert_eq!(cutoff_k(&g, &ExactReal::int(10), 2.0).unwrap(), 2);
        assert_eq!(cutoff_k(&g, &ExactReal::ratio(1001, 1000), 1.0).unwrap(), 0);
        assert!(cutoff_k(&g, &ExactReal::ratio(1, 2), 1.0).is_err());
        let mut last = 0;
        for v in [2, 10, 100, 1000, 10_000, 1_000_000] {
            let k = cutoff_k(&g, &ExactReal::int(v), 1.0).unwrap();
            assert!(k >= last);
            let pred = ((v as f64).ln() / (1.0 / g.to_f64()).ln()).floor() as i64;
            assert!((k as i64 - pred).abs() <= 1);
            last = k;
        }
    }

    #[test]
    fn k_zero_is_empty() {
        let inst = exact_instance(wilton::wilton_params::<f64>(53), 200, 1e-13);
        let t = iterate(&inst, &ExactReal::golden(), &ExactReal::int(10), 0).unwrap();
        assert!(t.rows.is_empty());
        assert_eq!(cabs(&t.residual), 0.0);
    }

    #[test]
    fn exact_instance_has_no_eps() {
        let inst = exact_instance(wilton::wilton_params::<f64>(53), 400, 1e-13);
        let t = iterate(&inst, &ExactReal::silver(), &ExactReal::int(50), 6).unwrap();
        for r in &t.rows {
            assert!(cabs(&r.eps) < 1e-11, "{:?}", r.eps);
        }
        assert!(cabs(&t.residual) < 1e-13);
    }

    #[test]
    fn chowla_eps_matches_eps1() {
        let ctx = Autocorr::<f64>::new(53, 1e-12);
        let inst = chowla_instance(&ctx, 100);
        let x = ExactReal::ratio(2, 5);
        let t = iterate(&inst, &x, &ExactReal::int(100), 2).unwrap();
        let st = cf::expand(&x, 2).unwrap();
        for r in &t.rows {
            let want = chowla::eps1::<f64>(st.alpha(r.j), &r.v, 1e-12, 53).unwrap().value * -2.0;
            assert!((r.eps.re - want).abs() < 1e-9, "{} {}", r.eps.re, want);
        }
        assert!(cabs(&t.residual) < 1e-12);
    }

    #[test]
    fn chowla_limit_at_rational_is_wilton() {
        let ctx = Autocorr::<f64>::new(53, 1e-11);
        let inst = chowla_instance(&ctx, 100);
        let sched = geometric_schedule(1000, 6);
        match converge_via_afe(&inst, &ExactReal::ratio(2, 5), &sched, 100, 0.0).unwrap() {
            AfeLimit::Compared { gap, predicted, .. } => {
                assert!((predicted.value.re - (2.5f64.ln() - 0.4 * 2f64.ln())).abs() < 1e-14);
                assert!(gap < 1e-3, "{gap}");
            }
            AfeLimit::NoLimitAtRationals => panic!("z0 is declared"),
        }
    }

    #[test]
    fn undeclared_divergent_z0() {
        let p = wilton::wilton_params::<f64>(53);
        let f: FFn<f64> = Arc::new(|_x: &ExactReal, v: &ExactReal| Ok(real(v.to_f64().ln())));
        let inst = AfeInstance::new("log v", p, f);
        let sched = geometric_schedule(10, 12);
        assert!(matches!(
            converge_via_afe(&inst, &ExactReal::ratio(1, 3), &sched, 10, 0.0).unwrap(),
            AfeLimit::NoLimitAtRationals
        ));
    }

    #[test]
    fn probe_on_exact_instance() {
        let inst = exact_instance(wilton::wilton_params::<f64>(53), 10, 0.0);
        let grid: Vec<_> = (1..10).map(|i| (ExactReal::ratio(i, 10), ExactReal::int(100))).collect();
        let rep = hypothesis_probe(&inst, &grid, Some(Declared { eps: 1e-12, f_at_1: 10.0, f_ratio: 10.0 })).unwrap();
        assert!(rep.sup_eps < 1e-14 && rep.violations.is_empty());
    }
}
