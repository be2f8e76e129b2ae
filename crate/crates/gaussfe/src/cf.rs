//! Continued fractions, Gauss iterates α_k, products β_k and cells.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numbers::{BigFloat, ExactReal, Kind};
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    Finite(usize),
    Infinite,
    /// Float inputs: the expansion is only known up to a reliable prefix.
    Unknown,
}

impl Depth {
    pub fn exceeds(&self, k: usize) -> bool {
        match self {
            Depth::Finite(d) => *d > k,
            _ => true,
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(k) => write!(f, "{k}"),
            Depth::Infinite => write!(f, "inf"),
            Depth::Unknown => write!(f, "unknown"),
        }
    }
}

/// One level k of the expansion: a_k, p_k/q_k, α_k and β_k.
#[derive(Clone, Debug)]
pub struct Level {
    pub k: usize,
    pub a: Integer,
    pub p: Integer,
    pub q: Integer,
    pub alpha: ExactReal,
    pub beta: ExactReal,
}

enum Orbit {
    /// α_k = cur/prev with Euclid remainders; `den` is the denominator of x.
    Euclid {
        prev: Integer,
        cur: Integer,
        den: Integer,
        float_prec: Option<u32>,
    },
    Quad(crate::numbers::QuadIrrational),
}

/// Streaming Gauss-map orbit of x ∈ [0,1).
pub struct GaussIter {
    x: ExactReal,
    orbit: Orbit,
    k: usize,
    p: (Integer, Integer),
    q: (Integer, Integer),
    started: bool,
    finished: bool,
    reliable: Option<usize>,
}

impl GaussIter {
    pub fn new(x: &ExactReal) -> Result<Self> {
        check_unit(x)?;
        let (orbit, reliable) = match x {
            ExactReal::Quadratic(q) => (Orbit::Quad(q.clone()), None),
            ExactReal::Rational(r) => (
                Orbit::Euclid { prev: r.denom().clone(), cur: r.numer().clone(), den: r.denom().clone(), float_prec: None },
                None,
            ),
            ExactReal::Float(f) => {
                let r = f.to_rational().ok_or_else(|| Error::Domain("non-finite float".into()))?;
                let rel = if r.cmp0() == Ordering::Equal { usize::MAX } else { reliable_depth(f, &r) };
                (
                    Orbit::Euclid {
                        prev: r.denom().clone(),
                        cur: r.numer().clone(),
                        den: r.denom().clone(),
                        float_prec: Some(f.prec()),
                    },
                    Some(rel),
                )
            }
        };
        Ok(GaussIter {
            x: x.clone(),
            orbit,
            k: 0,
            p: (Integer::from(1), Integer::new()),
            q: (Integer::new(), Integer::from(1)),
            started: false,
            finished: false,
            reliable,
        })
    }

    /// Number of quotients guaranteed correct for a float input.
    pub fn reliable_depth(&self) -> Option<usize> {
        self.reliable
    }

    /// True when the next level would exceed the reliable prefix of a float.
    pub fn exhausted(&self) -> bool {
        matches!(self.reliable, Some(r) if self.started && self.k >= r)
    }

    fn current_alpha(&self) -> ExactReal {
        match &self.orbit {
            Orbit::Quad(q) => ExactReal::Quadratic(q.clone()),
            Orbit::Euclid { prev, cur, float_prec, .. } => wrap(Rational::from((cur.clone(), prev.clone())), *float_prec),
        }
    }

    fn current_beta(&self) -> ExactReal {
        match &self.orbit {
            Orbit::Euclid { cur, den, float_prec, .. } => wrap(Rational::from((cur.clone(), den.clone())), *float_prec),
            Orbit::Quad(_) => {
                // |p_k − x q_k|
                let v = self.x.affine(&Integer::from(-&self.q.1), &self.p.1);
                v.abs()
            }
        }
    }

    fn level(&self, a: Integer) -> Level {
        Level { k: self.k, a, p: self.p.1.clone(), q: self.q.1.clone(), alpha: self.current_alpha(), beta: self.current_beta() }
    }

    fn alpha_is_zero(&self) -> bool {
        match &self.orbit {
            Orbit::Quad(_) => false,
            Orbit::Euclid { cur, .. } => *cur == 0,
        }
    }
}

fn wrap(r: Rational, float_prec: Option<u32>) -> ExactReal {
    match float_prec {
        Some(p) => ExactReal::Float(BigFloat::from_rational(&r, p)),
        None => ExactReal::Rational(r),
    }
}

impl Iterator for GaussIter {
    type Item = Level;

    fn next(&mut self) -> Option<Level> {
        if self.finished {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.level(Integer::new()));
        }
        if self.alpha_is_zero() || self.exhausted() {
            self.finished = true;
            return None;
        }
        let a = match &mut self.orbit {
            Orbit::Quad(q) => {
                let (a, next) = q.recip().floor_frac();
                *q = next;
                a
            }
            Orbit::Euclid { prev, cur, .. } => {
                let (a, r) = std::mem::take(prev).div_rem_floor(cur.clone());
                *prev = std::mem::replace(cur, r);
                a
            }
        };
        let p_next = Integer::from(&a * &self.p.1) + &self.p.0;
        let q_next = Integer::from(&a * &self.q.1) + &self.q.0;
        self.p = (std::mem::replace(&mut self.p.1, p_next.clone()), p_next);
        self.q = (std::mem::replace(&mut self.q.1, q_next.clone()), q_next);
        self.k += 1;
        Some(self.level(a))
    }
}

fn check_unit(x: &ExactReal) -> Result<()> {
    if x.signum() == Ordering::Less || *x >= ExactReal::int(1) {
        return Err(Error::Domain(format!("{x} is outside [0,1)")));
    }
    Ok(())
}

/// Common prefix of the expansions of the two ends of x ± ulp/2, minus one.
fn reliable_depth(f: &BigFloat, r: &Rational) -> usize {
    let h = f.half_ulp();
    let lo = Rational::from(r - &h);
    let hi = Rational::from(r + &h);
    let common = quotients_of(&lo).zip(quotients_of(&hi)).take_while(|(a, b)| a == b).count();
    common.saturating_sub(1)
}

/// Partial quotients of a rational in [0,1) by Euclid.
fn quotients_of(r: &Rational) -> impl Iterator<Item = Integer> {
    let mut prev = r.denom().clone();
    let mut cur = r.numer().clone();
    std::iter::from_fn(move || {
        if cur == 0 {
            return None;
        }
        let (a, rem) = std::mem::take(&mut prev).div_rem_floor(cur.clone());
        prev = std::mem::replace(&mut cur, rem);
        Some(a)
    })
}

/// Continued-fraction record of x up to some level.
#[derive(Clone, Debug)]
pub struct CFState {
    pub x: ExactReal,
    levels: Vec<Level>,
    depth: Depth,
    exhausted: bool,
}

impl CFState {
    /// Number of quotients held.
    pub fn len(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    /// Whether a float input ran out of reliable quotients before `k_max`.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// a_k for 1 ≤ k ≤ len.
    pub fn a(&self, k: usize) -> &Integer {
        &self.levels[k].a
    }

    pub fn quotients(&self) -> Vec<Integer> {
        self.levels.iter().skip(1).map(|l| l.a.clone()).collect()
    }

    /// p_j for −1 ≤ j ≤ len.
    pub fn p(&self, j: isize) -> Integer {
        if j < 0 {
            Integer::from(1)
        } else {
            self.levels[j as usize].p.clone()
        }
    }

    /// q_j for −1 ≤ j ≤ len.
    pub fn q(&self, j: isize) -> Integer {
        if j < 0 {
            Integer::new()
        } else {
            self.levels[j as usize].q.clone()
        }
    }

    pub fn alpha(&self, k: usize) -> &ExactReal {
        &self.levels[k].alpha
    }

    /// β_j for −1 ≤ j ≤ len (β_{−1} = 1).
    pub fn beta(&self, j: isize) -> ExactReal {
        if j < 0 {
            ExactReal::int(1)
        } else {
            self.levels[j as usize].beta.clone()
        }
    }

    /// |p_j − x q_j| without rounding, floats taken at their dyadic value.
    pub fn beta_exact(&self, j: isize) -> ExactReal {
        if j < 0 {
            return ExactReal::int(1);
        }
        self.x.affine(&(-self.q(j)), &self.p(j)).abs()
    }
}

/// Expansion up to min(k_max, depth) levels; floats error past their reliable prefix.
pub fn expand(x: &ExactReal, k_max: usize) -> Result<CFState> {
    let st = expand_reliable(x, k_max)?;
    if st.exhausted {
        return Err(Error::PrecisionExhausted { reliable: st.len() });
    }
    Ok(st)
}

/// Like [`expand`] but stops quietly at the reliable prefix of a float.
pub fn expand_reliable(x: &ExactReal, k_max: usize) -> Result<CFState> {
    let mut it = GaussIter::new(x)?;
    let mut levels = Vec::new();
    for lvl in it.by_ref() {
        let done = lvl.k >= k_max;
        levels.push(lvl);
        if done {
            break;
        }
    }
    let got = levels.len() - 1;
    let depth = match x.kind() {
        Kind::Quadratic => Depth::Infinite,
        Kind::Rational => Depth::Finite(rational_depth(&x.as_rational().unwrap_or_default())),
        Kind::Float if x.is_zero() => Depth::Finite(0),
        Kind::Float => Depth::Unknown,
    };
    let exhausted = got < k_max && x.kind() == Kind::Float && !x.is_zero() && it.exhausted();
    Ok(CFState { x: x.clone(), levels, depth, exhausted })
}

fn rational_depth(r: &Rational) -> usize {
    quotients_of(r).count()
}

/// Depth of x: normalized expansion length, ∞ for quadratic irrationals.
pub fn depth(x: &ExactReal) -> Result<Depth> {
    check_unit(x)?;
    match x.kind() {
        Kind::Rational => Ok(Depth::Finite(rational_depth(&x.as_rational().unwrap_or_default()))),
        Kind::Quadratic => Ok(Depth::Infinite),
        Kind::Float if x.is_zero() => Ok(Depth::Finite(0)),
        Kind::Float => Err(Error::Undecidable),
    }
}

/// [0; b_1, …, b_k] in lowest terms.
pub fn value_of(quotients: &[Integer]) -> Result<Rational> {
    let (p, q) = convergent(quotients)?;
    Ok(Rational::from((p.1, q.1)))
}

/// ((p_{k−1}, p_k), (q_{k−1}, q_k)) for the given quotients.
fn convergent(quotients: &[Integer]) -> Result<((Integer, Integer), (Integer, Integer))> {
    let mut p = (Integer::from(1), Integer::new());
    let mut q = (Integer::new(), Integer::from(1));
    for b in quotients {
        if *b < 1 {
            return Err(Error::Domain("partial quotients must be ≥ 1".into()));
        }
        let pn = Integer::from(b * &p.1) + &p.0;
        let qn = Integer::from(b * &q.1) + &q.0;
        p = (std::mem::replace(&mut p.1, pn.clone()), pn);
        q = (std::mem::replace(&mut q.1, qn.clone()), qn);
    }
    Ok((p, q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub quotients: Vec<Integer>,
    pub lo: Rational,
    pub hi: Rational,
}

impl Cell {
    pub fn depth(&self) -> usize {
        self.quotients.len()
    }

    pub fn contains(&self, x: &ExactReal) -> bool {
        let lo = ExactReal::Rational(self.lo.clone());
        let hi = ExactReal::Rational(self.hi.clone());
        lo < *x && *x < hi
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// The open cell 𝔠(b_1..b_k) with endpoints p_k/q_k and (p_k+p_{k−1})/(q_k+q_{k−1}).
pub fn cell(quotients: &[Integer]) -> Result<Cell> {
    if quotients.is_empty() {
        return Ok(Cell { quotients: vec![], lo: Rational::new(), hi: Rational::from(1) });
    }
    let (p, q) = convergent(quotients)?;
    let e1 = Rational::from((p.1.clone(), q.1.clone()));
    let e2 = Rational::from((p.1 + p.0, q.1 + q.0));
    let (lo, hi) = if quotients.len().is_multiple_of(2) { (e1, e2) } else { (e2, e1) };
    Ok(Cell { quotients: quotients.to_vec(), lo, hi })
}

/// The depth-K cell containing x (requires depth(x) > K).
pub fn cell_of(x: &ExactReal, k: usize) -> Result<Cell> {
    let st = expand_reliable(x, k + 1)?;
    let enough = match st.depth() {
        Depth::Finite(d) => d > k,
        Depth::Infinite => true,
        Depth::Unknown => st.len() > k,
    };
    if !enough {
        let d = match st.depth() {
            Depth::Finite(d) => d,
            _ => st.len(),
        };
        return Err(Error::DepthTooSmall { depth: d, needed: k });
    }
    let c = cell(&st.quotients()[..k])?;
    if k > 0 && !c.contains(x) {
        return Err(Error::Domain(format!("{x} is not inside {c}")));
    }
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The two depth-K cells adjacent to r = [0; a_1, …, a_K].
///
/// `c` is 𝔠(a_1..a_K), whose far endpoint is (p+p_{K−1})/(q+q_{K−1}); it lies
/// to the right of r when K is even. `c_prime` is 𝔠(a_1..a_K − 1) on the other
/// side, far endpoint (p−p_{K−1})/(q−q_{K−1}); near r it coincides with the
/// depth K+1 cell 𝔠(a_1..a_K − 1, 1).
#[derive(Clone, Debug)]
pub struct NeighborCells {
    pub depth: usize,
    pub c: Cell,
    pub c_prime: Cell,
    pub c_side: Side,
}

impl NeighborCells {
    pub fn left(&self) -> &Cell {
        if self.c_side == Side::Left {
            &self.c
        } else {
            &self.c_prime
        }
    }
    pub fn right(&self) -> &Cell {
        if self.c_side == Side::Right {
            &self.c
        } else {
            &self.c_prime
        }
    }
}

pub fn neighbor_cells(r: &Rational) -> Result<NeighborCells> {
    if r.cmp0() != Ordering::Greater || *r >= 1 {
        return Err(Error::Domain(format!("{r} is outside (0,1)")));
    }
    let st = expand(&ExactReal::Rational(r.clone()), usize::MAX)?;
    let k = st.len();
    let quot = st.quotients();
    let c = cell(&quot)?;
    let mut q2 = quot.clone();
    q2[k - 1] -= 1;
    let c_prime = cell(&q2)?;
    let c_side = if k % 2 == 0 { Side::Right } else { Side::Left };
    Ok(NeighborCells { depth: k, c, c_prime, c_side })
}

/// A quadratic irrational inside a neighbor cell of r that tends to r as n → ∞:
/// [0; a_1, …, a_K, n, 1, 1, …] in 𝔠, or [0; a_1, …, a_K − 1, 1, n, 1, 1, …] in 𝔠′.
pub fn cell_approach(r: &Rational, in_c_prime: bool, n: &Integer) -> Result<ExactReal> {
    if *n < 1 {
        return Err(Error::Domain("approach index must be ≥ 1".into()));
    }
    let st = expand(&ExactReal::Rational(r.clone()), usize::MAX)?;
    let mut quot = st.quotients();
    if quot.is_empty() {
        return Err(Error::Domain(format!("{r} has depth 0")));
    }
    if in_c_prime {
        let k = quot.len();
        quot[k - 1] -= 1;
        quot.push(Integer::from(1));
    }
    let (p, q) = convergent(&quot)?;
    // y = [n; 1, 1, …] = n + (√5 − 1)/2
    let y = ExactReal::golden().affine(&Integer::from(1), n);
    y.mobius(&p.1, &p.0, &q.1, &q.0)
}

fn fib(n: usize) -> Integer {
    let (mut a, mut b) = (Integer::new(), Integer::from(1));
    for _ in 0..n {
        let c = Integer::from(&a + &b);
        a = std::mem::replace(&mut b, c);
    }
    a
}

/// 1/(q_{k+1}+q_k) ≤ β_k ≤ 1/q_{k+1} ≤ 1/F_{k+2}, checked exactly.
pub fn beta_bounds_check(state: &CFState, k: isize) -> Result<bool> {
    let need = (k + 1).max(0) as usize;
    if state.len() < need {
        return Err(Error::DepthTooSmall { depth: state.len(), needed: need });
    }
    let beta = state.beta_exact(k);
    let q1 = state.q(k + 1);
    let q0 = state.q(k);
    let lower = ExactReal::Rational(Rational::from((Integer::from(1), Integer::from(&q1 + &q0))));
    let upper = ExactReal::Rational(Rational::from((Integer::from(1), q1.clone())));
    let fib_ok = q1 >= fib((k + 2) as usize);
    Ok(lower <= beta && beta <= upper && fib_ok)
}

/// The three quantities of the log bracket at level k ≥ 0:
/// (−log(2q_k)/q_k, β_{k−1}log(1/α_k) − log(q_{k+1})/q_k, log2/q_k).
pub fn log_bracket<T: Real>(state: &CFState, k: usize, prec: u32) -> Result<(T, T, T)> {
    if state.len() < k + 1 {
        return Err(Error::DepthTooSmall { depth: state.len(), needed: k + 1 });
    }
    let alpha = state.alpha(k);
    if alpha.is_zero() {
        return Err(Error::Domain("α_k = 0".into()));
    }
    let qk = T::from_integer(&state.q(k as isize), prec);
    let qk1 = T::from_integer(&state.q(k as isize + 1), prec);
    let beta: T = state.beta(k as isize - 1).to_real(prec);
    let two = T::from_i64(2, prec);
    let mid = beta * alpha.neg_log::<T>(prec) - qk1.ln() / qk.clone();
    let lower = -(two.clone() * qk.clone()).ln() / qk.clone();
    let upper = two.ln() / qk;
    Ok((lower, mid, upper))
}

/// max(φ^σ, 1/limsup β_{j−1}^{σ/j}) estimated over the available levels.
pub fn rho_lower_bound<T: Real>(state: &CFState, s: &Complex<T>) -> f64 {
    let sigma = s.re.to_f64();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let golden = phi.powf(sigma.max(0.0));
    let n = state.len();
    if n < 2 || sigma <= 0.0 {
        return golden;
    }
    let mut root_max: f64 = 0.0;
    for j in (n / 2).max(1)..=n {
        let b = state.beta(j as isize - 1).to_float(64);
        let lb = b.to_f64().ln();
        if lb.is_finite() {
            root_max = root_max.max((sigma * lb / j as f64).exp());
        }
    }
    if root_max <= 0.0 {
        return golden;
    }
    golden.max(1.0 / root_max)
}

/// The identity α_k = −(p_k − x q_k)/(p_{k−1} − x q_{k−1}), decided exactly.
pub fn alpha_identity_holds(state: &CFState, k: usize) -> Result<bool> {
    let pk = state.p(k as isize);
    let qk = state.q(k as isize);
    let pk1 = state.p(k as isize - 1);
    let qk1 = state.q(k as isize - 1);
    let rhs = state.x.mobius(&qk, &Integer::from(-&pk), &Integer::from(-&qk1), &pk1)?;
    Ok(match state.x.kind() {
        Kind::Float => {
            let exact = state.x.as_rational().unwrap_or_default();
            let st = expand_reliable(&ExactReal::Rational(exact), k)?;
            st.alpha(k).clone() == rhs
        }
        _ => *state.alpha(k) == rhs,
    })
}

/// β_k = 1/(q_{k+1} + α_{k+1} q_k), decided exactly (needs level k+1).
pub fn beta_reciprocal_holds(state: &CFState, k: usize) -> Result<bool> {
    if state.len() < k + 1 {
        return Err(Error::DepthTooSmall { depth: state.len(), needed: k + 1 });
    }
    let q1 = state.q(k as isize + 1);
    let q0 = state.q(k as isize);
    // 1/(q1 + α q0) as a Möbius image of α
    let alpha = state.alpha(k + 1);
    let alpha = match state.x.kind() {
        Kind::Float => {
            let exact = state.x.as_rational().unwrap_or_default();
            expand_reliable(&ExactReal::Rational(exact), k + 1)?.alpha(k + 1).clone()
        }
        _ => alpha.clone(),
    };
    let rhs = alpha.mobius(&Integer::new(), &Integer::from(1), &q0, &q1)?;
    Ok(state.beta_exact(k as isize) == rhs)
}

/// CSV with columns k, a_k, p_k, q_k, alpha_k, beta_k.
pub fn expansion_csv(state: &CFState, prec: u32) -> Result<String> {
    let digits = ((prec as f64) * std::f64::consts::LOG10_2).ceil() as usize;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Domain(e.to_string());
    w.write_record(["k", "a_k", "p_k", "q_k", "alpha_k", "beta_k"]).map_err(io)?;
    for l in state.levels() {
        w.write_record([
            l.k.to_string(),
            l.a.to_string(),
            l.p.to_string(),
            l.q.to_string(),
            l.alpha.to_float(prec).to_decimal(Some(digits)),
            l.beta.to_float(prec).to_decimal(Some(digits)),
        ])
        .map_err(io)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Domain(e.to_string()))?).map_err(|e| Error::Domain(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&i| Integer::from(i)).collect()
    }

    #[test]
    fn two_fifths() {
        let st = expand(&ExactReal::ratio(2, 5), 10).unwrap();
        assert_eq!(st.quotients(), ints(&[2, 2]));
        assert_eq!(st.depth(), Depth::Finite(2));
        assert_eq!(*st.alpha(1), ExactReal::ratio(1, 2));
        assert!(st.alpha(2).is_zero());
        assert_eq!(st.beta(0), ExactReal::ratio(2, 5));
        assert_eq!(st.beta(1), ExactReal::ratio(1, 5));
        assert_eq!((st.p(1), st.q(1)), (Integer::from(1), Integer::from(2)));
        assert_eq!((st.p(2), st.q(2)), (Integer::from(2), Integer::from(5)));
    }

    #[test]
    fn zero_has_depth_zero() {
        let st = expand(&ExactReal::zero(), 5).unwrap();
        assert_eq!(st.len(), 0);
        assert_eq!(st.depth(), Depth::Finite(0));
    }

    #[test]
    fn golden_is_a_fixed_point() {
        let x = ExactReal::golden();
        let st = expand(&x, 12).unwrap();
        assert!(st.quotients().iter().all(|a| *a == 1));
        for k in 0..12 {
            assert_eq!(*st.alpha(k), x);
            let xq = x.to_float(256);
            let b = st.beta(k as isize).to_float(256);
            let expect = rug::Float::with_val(256, rug::ops::Pow::pow(xq.inner(), k as u32 + 1));
            let diff = rug::Float::with_val(256, b.inner() - &expect);
            let rel = diff / &expect;
            assert!(rel.abs() < 1e-70, "k={k}");
        }
        assert_eq!(st.depth(), Depth::Infinite);
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth(&ExactReal::ratio(1, 9)).unwrap(), Depth::Finite(1));
        assert_eq!(depth(&ExactReal::ratio(3, 7)).unwrap(), Depth::Finite(2));
        assert_eq!(depth(&ExactReal::golden()).unwrap(), Depth::Infinite);
        let f = ExactReal::float(BigFloat::from_f64(0.3, 128));
        assert_eq!(depth(&f), Err(Error::Undecidable));
    }

    #[test]
    fn value_of_examples() {
        assert_eq!(value_of(&ints(&[2, 2])).unwrap(), Rational::from((2, 5)));
        assert_eq!(value_of(&ints(&[7])).unwrap(), Rational::from((1, 7)));
        assert_eq!(value_of(&ints(&[1, 1, 1, 1, 1])).unwrap(), Rational::from((5, 8)));
    }

    #[test]
    fn cells() {
        let c = cell(&ints(&[2])).unwrap();
        assert_eq!((c.lo.clone(), c.hi.clone()), (Rational::from((1, 3)), Rational::from((1, 2))));
        let c0 = cell(&[]).unwrap();
        assert_eq!((c0.lo, c0.hi), (Rational::new(), Rational::from(1)));
        let c11 = cell(&ints(&[1, 1])).unwrap();
        assert_eq!((c11.lo, c11.hi), (Rational::from((1, 2)), Rational::from((2, 3))));
        assert_eq!(cell_of(&ExactReal::golden(), 2).unwrap().quotients, ints(&[1, 1]));
        assert_eq!(cell_of(&ExactReal::ratio(2, 5), 1).unwrap().quotients, ints(&[2]));
        assert!(matches!(cell_of(&ExactReal::ratio(2, 5), 2), Err(Error::DepthTooSmall { .. })));
    }

    #[test]
    fn neighbors() {
        let n = neighbor_cells(&Rational::from((1, 2))).unwrap();
        assert_eq!(n.c_side, Side::Left);
        assert_eq!(n.c.lo, Rational::from((1, 3)));
        assert_eq!(n.c_prime.hi, Rational::from(1));
        let n = neighbor_cells(&Rational::from((2, 5))).unwrap();
        assert_eq!(n.c_side, Side::Right);
        assert_eq!((n.c.lo.clone(), n.c.hi.clone()), (Rational::from((2, 5)), Rational::from((3, 7))));
        assert_eq!((n.c_prime.lo.clone(), n.c_prime.hi.clone()), (Rational::from((1, 3)), Rational::from((2, 5))));
        let n = neighbor_cells(&Rational::from((1, 3))).unwrap();
        let far: Vec<Rational> = vec![n.c.lo.clone(), n.c_prime.hi.clone()];
        assert_eq!(far, vec![Rational::from((1, 4)), Rational::from((1, 2))]);
    }

    #[test]
    fn approach_points_sit_in_their_cells() {
        let r = Rational::from((2, 5));
        let cells = neighbor_cells(&r).unwrap();
        for n in [10i64, 1000, 1_000_000_000_000] {
            let x = cell_approach(&r, false, &Integer::from(n)).unwrap();
            assert!(cells.c.contains(&x));
            let y = cell_approach(&r, true, &Integer::from(n)).unwrap();
            assert!(cells.c_prime.contains(&y));
        }
        let near = cell_approach(&r, false, &Integer::from(1_000_000)).unwrap();
        assert!((near.to_f64() - 0.4).abs() < 1e-7);
    }

    #[test]
    fn beta_bounds_examples() {
        let g = expand(&ExactReal::golden(), 6).unwrap();
        assert!(beta_bounds_check(&g, 3).unwrap());
        assert_eq!(g.q(4), 5);
        let r = expand(&ExactReal::ratio(2, 5), 5).unwrap();
        assert!(beta_bounds_check(&r, 0).unwrap());
        assert!(beta_bounds_check(&r, -1).unwrap());
    }

    #[test]
    fn rho_for_golden_is_phi() {
        let g = expand(&ExactReal::golden(), 40).unwrap();
        let rho = rho_lower_bound(&g, &Complex::new(1.0f64, 0.0));
        assert!((rho - 1.618033988749895).abs() < 1e-9);
        assert!(rho_lower_bound(&g, &Complex::new(0.0f64, 0.0)) >= 1.0);
    }

    #[test]
    fn float_expansion_stops_at_reliable_prefix() {
        let f = ExactReal::float(ExactReal::golden().to_float(128));
        let st = expand_reliable(&f, 500).unwrap();
        assert!(st.exhausted());
        assert!(st.len() > 80 && st.len() < 95, "{}", st.len());
        assert!(st.quotients().iter().all(|a| *a == 1));
        assert!(matches!(expand(&f, 500), Err(Error::PrecisionExhausted { .. })));
        assert!(expand(&f, 50).is_ok());
    }

    #[test]
    fn csv_header() {
        let st = expand(&ExactReal::ratio(2, 5), 5).unwrap();
        let s = expansion_csv(&st, 64).unwrap();
        assert!(s.starts_with("k,a_k,p_k,q_k,alpha_k,beta_k\n0,0,0,1,"));
        assert_eq!(s.lines().count(), 4);
    }
}
