//! Closed-form integrals of fractional-part integrands against dt/t².
//!
//! On a piece [t0, t0+L] where {t} = u0 + s and {λt} = w0 + λs, every
//! integrand here is a quadratic polynomial in s over (t0+s)², so it reduces
//! to the three moments I_k = ∫_0^L s^k/(t0+s)² ds.

use std::sync::OnceLock;

use rug::{Integer, Rational};

use crate::numbers::ExactReal;
use crate::real::{CompensatedSum, Real};

/// (I0, I1, I2) on [t0, t0+len], t0 > 0.
pub fn moments<T: Real>(t0: &T, len: &T, prec: u32) -> (T, T, T) {
    let t0 = &t0.with_prec(prec);
    let len = &len.with_prec(prec);
    let one = T::one();
    let r = len.clone() / t0.clone();
    let i0 = len.clone() / (t0.clone() * (t0.clone() + len.clone()));
    let quarter = T::from_f64_prec(0.25, prec);
    let (g1, g2) = if r <= quarter {
        small_r(&r, prec)
    } else {
        let l = r.ln_1p();
        let q = r.clone() / (one.clone() + r.clone());
        let two = T::from_i64(2, prec);
        (l.clone() - q.clone(), r.clone() - two * l + q)
    };
    (i0, g1, t0.clone() * g2)
}

/// Series for log1p(r) − r/(1+r) and r − 2log1p(r) + r/(1+r) at small r.
fn small_r<T: Real>(r: &T, prec: u32) -> (T, T) {
    let u = T::unit_roundoff(prec) * 0.25;
    let mut p = r.clone() * r.clone();
    let mut g1 = T::zero();
    let mut g2 = T::zero();
    let mut k: i64 = 2;
    loop {
        let kt = T::from_i64(k, prec);
        let t1 = p.clone() * T::from_i64(k - 1, prec) / kt.clone();
        let t2 = p.clone() * T::from_i64(k - 2, prec) / kt;
        if k % 2 == 0 {
            g1 += t1.clone();
            g2 -= t2.clone();
        } else {
            g1 -= t1.clone();
            g2 += t2.clone();
        }
        if k >= 4 && t1.abs().to_f64() <= u * g1.abs().to_f64() && t2.abs().to_f64() <= u * g2.abs().to_f64() {
            break;
        }
        if k > 4000 {
            break;
        }
        p *= r.clone();
        k += 1;
    }
    (g1, g2)
}

/// ∫ (c0 + c1 s + c2 s²)/(t0+s)² ds over [t0, t0+len].
pub fn quad_piece<T: Real>(t0: &T, len: &T, c: [T; 3], prec: u32) -> T {
    let (i0, i1, i2) = moments(t0, len, prec);
    let [c0, c1, c2] = c;
    c0 * i0 + c1 * i1 + c2 * i2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrand {
    /// {t}²
    FracSq,
    /// {t}
    Frac,
    /// B̃1(t) = {t} − ½
    B1,
    /// B̃2(t) = {t}² − {t} + 1/6
    B2,
}

impl Integrand {
    fn coeffs<T: Real>(self, u0: &T, prec: u32) -> [T; 3] {
        let half = T::from_f64_prec(0.5, prec);
        match self {
            Integrand::FracSq => [u0.clone() * u0.clone(), T::from_i64(2, prec) * u0.clone(), T::one()],
            Integrand::Frac => [u0.clone(), T::one(), T::zero()],
            Integrand::B1 => [u0.clone() - half, T::one(), T::zero()],
            Integrand::B2 => {
                let sixth = T::one() / T::from_i64(6, prec);
                [u0.clone() * u0.clone() - u0.clone() + sixth, T::from_i64(2, prec) * u0.clone() - T::one(), T::one()]
            }
        }
    }
}

/// ∫_a^b f({t}) dt/t² for 0 < a ≤ b, split at the integers.
pub fn integer_pieces<T: Real>(f: Integrand, a: &T, b: &T, prec: u32) -> (T, usize) {
    let mut acc = CompensatedSum::<T>::new();
    let mut t0 = a.with_prec(prec);
    let mut n = t0.floor();
    let mut pieces = 0;
    while t0 < *b {
        let next = n.clone() + T::one();
        let t1 = if next < *b { next.clone() } else { b.clone() };
        let len = t1.clone() - t0.clone();
        if len > T::zero() {
            let u0 = t0.clone() - n.clone();
            acc.add(quad_piece(&t0, &len, f.coeffs(&u0, prec), prec));
            pieces += 1;
        }
        t0 = t1;
        n = next;
    }
    (acc.value(), pieces)
}

/// Oriented ∫_a^b {t}/t² for a, b > 0.
pub fn frac_integral<T: Real>(a: &T, b: &T, prec: u32) -> T {
    if a <= b {
        integer_pieces(Integrand::Frac, a, b, prec).0
    } else {
        -integer_pieces(Integrand::Frac, b, a, prec).0
    }
}

/// ∫_0^b {t}²/t² (the piece [0,1) contributes its length).
pub fn frac_sq_from_zero<T: Real>(b: &T, prec: u32) -> T {
    let one = T::one();
    if *b <= one {
        return b.clone();
    }
    one.clone() + integer_pieces(Integrand::FracSq, &one, b, prec).0
}

/// Bernoulli numbers B_0..B_n as exact rationals (B_1 = −½).
pub fn bernoulli(n: usize) -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let size = 160;
        let mut out = Vec::with_capacity(size + 1);
        let mut a: Vec<Rational> = Vec::with_capacity(size + 1);
        for m in 0..=size {
            a.push(Rational::from((Integer::from(1), Integer::from(m + 1))));
            for j in (1..=m).rev() {
                let d = Rational::from(&a[j - 1] - &a[j]);
                a[j - 1] = d * Integer::from(j);
            }
            out.push(a[0].clone());
        }
        out[1] = Rational::from((-1, 2));
        out
    });
    &t[..=n.min(t.len() - 1)]
}

/// ∫_N^∞ B̃_m(y) y^{−s} dy at an integer N by repeated integration by parts:
/// −Σ_j c_j B_{m+1+j}/((m+1+j) N^{s+j}), c_0 = 1, c_{j+1} = c_j (s+j)/(m+1+j).
pub fn periodic_tail<T: Real>(m: usize, s: usize, n: &T, prec: u32) -> T {
    let b = bernoulli(159);
    let u = T::unit_roundoff(prec) * 0.25;
    let mut coef = Rational::from(1);
    let mut npow = T::one();
    for _ in 0..s {
        npow *= n.clone();
    }
    let mut acc = T::zero();
    let mut last = f64::INFINITY;
    for j in 0..(159 - m - 1) {
        let idx = m + 1 + j;
        if b[idx].cmp0() != std::cmp::Ordering::Equal {
            let c = Rational::from(&coef * &b[idx]) / Integer::from(idx);
            let term = T::from_rational(&c, prec) / npow.clone();
            let mag = term.abs().to_f64();
            if mag > last {
                break;
            }
            acc -= term;
            last = mag;
            if mag <= u * acc.abs().to_f64() {
                break;
            }
        }
        coef = coef * Integer::from(s + j) / Integer::from(idx);
        npow *= n.clone();
    }
    acc
}

/// Starting integer for the asymptotic periodic tails.
fn tail_start(prec: u32) -> i64 {
    (prec as i64 / 2).max(64)
}

/// J1(Y) = ∫_Y^∞ B̃1(y)/y² dy for Y > 0.
pub fn j1<T: Real>(y: &T, prec: u32) -> T {
    periodic_integral(Integrand::B1, 1, 2, y, prec)
}

/// J2(Y) = ∫_Y^∞ B̃2(y)/y² dy for Y > 0.
pub fn j2<T: Real>(y: &T, prec: u32) -> T {
    periodic_integral(Integrand::B2, 2, 2, y, prec)
}

fn periodic_integral<T: Real>(f: Integrand, m: usize, s: usize, y: &T, prec: u32) -> T {
    let start = T::from_i64(tail_start(prec), prec);
    let n0 = if *y > start { y.floor() + T::one() } else { start };
    let head = integer_pieces(f, y, &n0, prec).0;
    head + periodic_tail(m, s, &n0, prec)
}

/// Merged breakpoints of {t} and {λt} on [a, b] for 0 < λ ≤ 1 and a > 0.
///
/// Ties between an integer n and a multiple m/λ are decided exactly.
struct ProdPieces<'a, T: Real> {
    lam: &'a ExactReal,
    lam_t: T,
    inv_lam: T,
    lam_f: f64,
    prec: u32,
    b: T,
    t0: T,
    n: Integer,
    m: Integer,
    u0: T,
    w0: T,
    done: bool,
}

impl<'a, T: Real> ProdPieces<'a, T> {
    fn new(lam: &'a ExactReal, a: &T, b: &T, prec: u32) -> Self {
        let a = &a.with_prec(prec);
        let lam_t: T = lam.to_real(prec);
        let inv_lam = T::one() / lam_t.clone();
        let n = a.floor().to_bigfloat().floor_integer();
        let lt = lam_t.clone() * a.clone();
        let m = lt.floor().to_bigfloat().floor_integer();
        let u0 = a.clone() - T::from_integer(&n, prec);
        let w0 = lt - T::from_integer(&m, prec);
        ProdPieces { lam, lam_f: lam.to_f64(), lam_t, inv_lam, prec, b: b.clone(), t0: a.clone(), n, m, u0, w0, done: false }
    }

    /// Sign of λ·n − m, decided exactly when floats cannot.
    fn cmp_mult(&self, n: &Integer, m: &Integer) -> std::cmp::Ordering {
        let nf = n.to_f64();
        let mf = m.to_f64();
        let d = self.lam_f * nf - mf;
        if d.abs() > 1e-9 * mf.abs().max(1.0) {
            return d.partial_cmp(&0.0).unwrap_or(std::cmp::Ordering::Equal);
        }
        self.lam.affine(n, &Integer::from(-m)).signum()
    }
}

impl<T: Real> Iterator for ProdPieces<'_, T> {
    /// (t0, len, u0, w0)
    type Item = (T, T, T, T);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let n1 = Integer::from(&self.n + 1);
        let m1 = Integer::from(&self.m + 1);
        // next integer n1 against next multiple m1/λ: compare λ·n1 with m1
        let ord = self.cmp_mult(&n1, &m1);
        let (t1, hit_n, hit_m) = match ord {
            std::cmp::Ordering::Less => (T::from_integer(&n1, self.prec), true, false),
            std::cmp::Ordering::Greater => (T::from_integer(&m1, self.prec) * self.inv_lam.clone(), false, true),
            std::cmp::Ordering::Equal => (T::from_integer(&n1, self.prec), true, true),
        };
        let (t1, last) = if t1 >= self.b { (self.b.clone(), true) } else { (t1, false) };
        let item = (self.t0.clone(), t1.clone() - self.t0.clone(), self.u0.clone(), self.w0.clone());
        if last {
            self.done = true;
            return Some(item);
        }
        if hit_n {
            self.n = n1;
            self.u0 = T::zero();
        } else {
            self.u0 = t1.clone() - T::from_integer(&self.n, self.prec);
        }
        if hit_m {
            self.m = m1;
            self.w0 = T::zero();
        } else {
            self.w0 = self.lam_t.clone() * t1.clone() - T::from_integer(&self.m, self.prec);
        }
        self.t0 = t1;
        Some(item)
    }
}

/// ∫_a^b {t}{λt}/t² dt for 0 < λ ≤ 1 and 0 < a ≤ b, with piece count.
pub fn prod_pieces<T: Real>(lam: &ExactReal, a: &T, b: &T, prec: u32) -> (T, usize) {
    let lam_t: T = lam.to_real(prec);
    let mut acc = CompensatedSum::<T>::new();
    let mut count = 0;
    for (t0, len, u0, w0) in ProdPieces::new(lam, a, b, prec) {
        if len <= T::zero() {
            continue;
        }
        let c = [u0.clone() * w0.clone(), u0 * lam_t.clone() + w0, lam_t.clone()];
        acc.add(quad_piece(&t0, &len, c, prec));
        count += 1;
    }
    (acc.value(), count)
}

/// ∫_0^b {t}{λt}/t² dt for λ > 0 (any size) and b ≥ 0.
pub fn prod_from_zero<T: Real>(lam: &ExactReal, b: &T, prec: u32) -> T {
    if lam.is_zero() || *b <= T::zero() {
        return T::zero();
    }
    if *lam > ExactReal::int(1) {
        // t = y/λ turns it into λ ∫_0^{λb} {y/λ}{y}/y²
        let inv = lam.invert().expect("nonzero");
        let l: T = lam.to_real(prec);
        return l.clone() * prod_from_zero(&inv, &(l * b.clone()), prec);
    }
    let lam_t: T = lam.to_real(prec);
    let one = T::one();
    if *b <= one {
        return lam_t * b.clone();
    }
    lam_t + prod_pieces(lam, &one, b, prec).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::BigFloat;

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 128)
    }

    #[test]
    fn moments_match_direct_formulas() {
        // direct log formulas at 256 bits as the oracle
        let big = |v: f64| BigFloat::from_f64(v, 256);
        for (t0, l) in [(3.0, 1.0), (1000.0, 0.25), (1.0, 10.0)] {
            let (i0, i1, i2) = moments(&t0, &l, 53);
            let (a, b) = (big(t0), big(t0 + l));
            let lg = (b.clone() / a.clone()).ln();
            let d = big(1.0) / a.clone() - big(1.0) / b.clone();
            let e1 = (lg.clone() - a.clone() * d.clone()).to_f64();
            let e2 = (big(l) - big(2.0) * a.clone() * lg + a.clone() * a * d.clone()).to_f64();
            assert!((i0 - d.to_f64()).abs() < 1e-15 * i0);
            assert!((i1 - e1).abs() < 1e-14 * e1);
            assert!((i2 - e2).abs() < 1e-14 * e2);
        }
    }

    #[test]
    fn small_r_series_is_accurate_in_bigfloat() {
        let (i0, i1, i2) = moments(&bf(1.0e6), &bf(1.0), 128);
        let t0 = bf(1.0e6);
        let t1 = bf(1.0e6 + 1.0);
        let e1 = (t1.clone() / t0.clone()).ln() - t0.clone() * (bf(1.0) / t0.clone() - bf(1.0) / t1.clone());
        assert!(((i1 - e1.clone()) / e1).abs().to_f64() < 1e-25);
        assert!(i0.to_f64() > 0.0 && i2.to_f64() > 0.0);
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[3], Rational::new());
        assert_eq!(b[12], Rational::from((-691, 2730)));
    }

    #[test]
    fn j1_matches_digamma_form() {
        // J1(N) = ψ(N) − log N + 1/(2N); ψ(1) = −γ
        let v = j1(&1.0f64, 53);
        assert!((v - (-0.5772156649015329 + 0.5)).abs() < 1e-14);
        let v: BigFloat = j1(&bf(1.0), 128);
        let g = BigFloat::euler_gamma(128);
        assert!((v - (bf(0.5) - g)).abs().to_f64() < 1e-36);
    }

    #[test]
    fn j2_small_argument_matches_leading_term() {
        // J2(Y) ≈ 1/(6Y) − log(1/Y) + … as Y → 0
        let y = 1e-6f64;
        let v = j2(&y, 53);
        let approx = 1.0 / (6.0 * y) - (1.0 / y).ln();
        assert!((v - approx).abs() < 2.0);
    }

    #[test]
    fn prod_at_lambda_one_equals_frac_sq() {
        let one = ExactReal::int(1);
        let a = prod_from_zero(&one, &bf(37.5), 128);
        let b = frac_sq_from_zero(&bf(37.5), 128);
        assert!((a.clone() - b.clone()).abs().to_f64() < 1e-35, "{a:?} {b:?}");
    }

    #[test]
    fn prod_scaling_identity() {
        // ∫_0^b {t}{λt}/t² = λ ∫_0^{λb} {y/λ}{y}/y²
        let lam = ExactReal::ratio(5, 2);
        let b = 41.3f64;
        let direct = prod_from_zero(&lam, &b, 53);
        let inv = ExactReal::ratio(2, 5);
        let mut riemann = 0.0;
        let n = 2_000_000;
        for i in 0..n {
            let t = (i as f64 + 0.5) * b / n as f64;
            let f = |z: f64| z - z.floor();
            riemann += f(t) * f(2.5 * t) / (t * t) * b / n as f64;
        }
        assert!((direct - riemann).abs() < 1e-4, "{direct} {riemann}");
        let other = 2.5 * prod_from_zero(&inv, &(2.5 * b), 53);
        assert!((direct - other).abs() < 1e-13);
    }
}
