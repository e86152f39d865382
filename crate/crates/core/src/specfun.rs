//! Gamma and Bessel functions of the first kind for real nonnegative order.
//!
//! `J_nu(x)` uses the ascending power series below `crossover_x` and the
//! Hankel large-argument expansion above it. The series is accumulated in
//! double-double arithmetic: near the crossover its terms reach ~1e7 and
//! plain `f64` summation would lose about seven digits to cancellation.

use crate::error::{Error, Result};
use crate::scalar::{c, from_usize, Real};

/// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const MAX_SERIES_TERMS: usize = 2000;
const MAX_HANKEL_TERMS: usize = 200;

/// Tuning knobs for the Bessel evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunConfig<T> {
    /// Relative size of the last retained series term.
    pub series_tol: T,
    /// Argument at which the power series hands off to the Hankel expansion.
    pub crossover_x: T,
}

impl<T: Real> Default for SpecFunConfig<T> {
    fn default() -> Self {
        Self {
            series_tol: T::epsilon() * c(0.25),
            crossover_x: c(20.0),
        }
    }
}

impl<T: Real> SpecFunConfig<T> {
    pub fn new(series_tol: T, crossover_x: T) -> Result<Self> {
        if !(series_tol > T::zero()) {
            return Err(Error::domain("SpecFunConfig", "series_tol must be > 0"));
        }
        if !(crossover_x > T::zero()) {
            return Err(Error::domain("SpecFunConfig", "crossover_x must be > 0"));
        }
        Ok(Self {
            series_tol,
            crossover_x,
        })
    }

    /// `J_order(x)` for `order >= 0`, `x >= 0`.
    pub fn bessel_j(&self, order: T, x: T) -> Result<T> {
        check_bessel_args(order, x)?;
        if x == T::zero() {
            return Ok(if order == T::zero() { T::one() } else { T::zero() });
        }
        if x < self.crossover_x {
            return Ok(self.series_prefactor(order, x) * self.series_sum(order, x));
        }
        let (value, err) = self.hankel(order, x);
        // The expansion is only asymptotic; when the order is large compared
        // with x its smallest term stays big and the series is still usable.
        if err > c::<T>(1e3) * T::epsilon() && x < self.series_limit() {
            return Ok(self.series_prefactor(order, x) * self.series_sum(order, x));
        }
        Ok(value)
    }

    /// `J_order(x) / x^order`, continuously extended to `1 / (2^order Gamma(order+1))` at 0.
    pub fn bessel_ratio(&self, order: T, x: T) -> Result<T> {
        check_bessel_args(order, x)?;
        let two = c::<T>(2.0);
        if x < self.crossover_x {
            let scale = two.powf(order) * gamma_unchecked(order + T::one());
            return Ok(self.series_sum(order, x) / scale);
        }
        let j = self.bessel_j(order, x)?;
        Ok(j * (-order * x.ln()).exp())
    }

    /// Raw power-series branch, exposed for branch-agreement checks.
    pub fn j_series(&self, order: T, x: T) -> Result<T> {
        check_bessel_args(order, x)?;
        Ok(self.series_prefactor(order, x) * self.series_sum(order, x))
    }

    /// Raw Hankel branch with its truncation estimate (size of the first omitted term).
    pub fn j_hankel(&self, order: T, x: T) -> Result<(T, T)> {
        check_bessel_args(order, x)?;
        if x == T::zero() {
            return Err(Error::domain("j_hankel", "x must be > 0"));
        }
        Ok(self.hankel(order, x))
    }

    fn series_limit(&self) -> T {
        // Double-double keeps ~32 digits; e^x / x bounds the largest term.
        c(36.0)
    }

    fn series_prefactor(&self, order: T, x: T) -> T {
        let half = x * c(0.5);
        if order == T::zero() {
            T::one()
        } else {
            (order * half.ln() - ln_gamma_unchecked(order + T::one())).exp()
        }
    }

    /// `sum_k (-x^2/4)^k / (k! (order+1)_k)` in double-double.
    fn series_sum(&self, order: T, x: T) -> T {
        let z = Dd::from_prod(x, x).scale(c(0.25));
        let mut term = Dd::from(T::one());
        let mut sum = Dd::from(T::one());
        for k in 1..MAX_SERIES_TERMS {
            let kf = from_usize::<T>(k);
            let denom = Dd::from(kf).mul(Dd::from_sum(kf, order));
            term = term.mul(z).div(denom).neg();
            sum = sum.add(term);
            if kf * kf > z.hi && term.hi.abs() <= self.series_tol * sum.hi.abs() {
                break;
            }
        }
        sum.hi + sum.lo
    }

    fn hankel(&self, order: T, x: T) -> (T, T) {
        let mu = c::<T>(4.0) * order * order;
        let eight_x = c::<T>(8.0) * x;
        let mut p = T::one();
        let mut q = T::zero();
        let mut term = T::one();
        let mut prev_abs = T::infinity();
        let mut err = T::zero();
        for k in 1..MAX_HANKEL_TERMS {
            let odd = from_usize::<T>(2 * k - 1);
            let next = term * (mu - odd * odd) / (from_usize::<T>(k) * eight_x);
            let next_abs = next.abs();
            // Past the turning point (odd > 2*order) the terms shrink until
            // the expansion diverges; stop at the smallest one.
            if odd > c::<T>(2.0) * order && next_abs > prev_abs {
                err = next_abs;
                break;
            }
            term = next;
            match k % 4 {
                1 => q += term,
                2 => p -= term,
                3 => q -= term,
                _ => p += term,
            }
            prev_abs = next_abs;
            err = next_abs;
            if next_abs <= self.series_tol * (p.abs() + q.abs()) {
                break;
            }
        }
        let chi = x - (order * c(0.5) + c(0.25)) * T::PI();
        let amp = (c::<T>(2.0) / (T::PI() * x)).sqrt();
        (amp * (p * chi.cos() - q * chi.sin()), amp * err)
    }
}

fn check_bessel_args<T: Real>(order: T, x: T) -> Result<()> {
    if !(order >= T::zero()) || !order.is_finite() {
        return Err(Error::domain("bessel_j", format!("order must be >= 0, got {order}")));
    }
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::domain("bessel_j", format!("x must be >= 0, got {x}")));
    }
    Ok(())
}

/// Gamma function for `x > 0`.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::domain("gamma", format!("x must be > 0, got {x}")));
    }
    Ok(gamma_unchecked(x))
}

/// Natural log of Gamma for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::domain("ln_gamma", format!("x must be > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked<T: Real>(x: T) -> T {
    if x < c(0.5) {
        // Shift up with Gamma(x) = Gamma(x + 1) / x.
        return gamma_unchecked(x + T::one()) / x;
    }
    if x <= c(24.0) && x == x.floor() {
        let k = x.to_usize().unwrap_or(1);
        return (1..k).fold(T::one(), |acc, i| acc * from_usize::<T>(i));
    }
    let z = x - T::one();
    let t = z + c(LANCZOS_G + 0.5);
    let half_pow = t.powf((z + c(0.5)) * c(0.5));
    (T::TAU()).sqrt() * half_pow * (half_pow * (-t).exp()) * lanczos_sum(z)
}

pub(crate) fn ln_gamma_unchecked<T: Real>(x: T) -> T {
    if x < c(0.5) {
        return ln_gamma_unchecked(x + T::one()) - x.ln();
    }
    let z = x - T::one();
    let t = z + c(LANCZOS_G + 0.5);
    c::<T>(0.5) * T::TAU().ln() + (z + c(0.5)) * t.ln() - t + lanczos_sum(z).ln()
}

fn lanczos_sum<T: Real>(z: T) -> T {
    let mut acc = c::<T>(LANCZOS[0]);
    for (i, &coef) in LANCZOS.iter().enumerate().skip(1) {
        acc += c::<T>(coef) / (z + from_usize(i));
    }
    acc
}

/// `J_order(x)` with the default configuration.
pub fn bessel_j<T: Real>(order: T, x: T) -> Result<T> {
    SpecFunConfig::default().bessel_j(order, x)
}

/// `J_order(x) / x^order` with the default configuration.
pub fn bessel_ratio<T: Real>(order: T, x: T) -> Result<T> {
    SpecFunConfig::default().bessel_ratio(order, x)
}

/// Positive zeros of `J_order` in `(0, x_max]`, ascending.
///
/// Zeros of `J_nu` are at least ~2.4 apart for `nu >= 0`, so a unit scan step
/// brackets each one exactly once before bisection.
pub fn bessel_zeros<T: Real>(order: T, x_max: T) -> Result<Vec<T>> {
    let cfg = SpecFunConfig::<T>::default();
    let mut zeros = Vec::new();
    let step = T::one();
    let mut lo = c::<T>(1e-3).min(x_max);
    let mut f_lo = cfg.bessel_j(order, lo)?;
    while lo < x_max {
        let hi = (lo + step).min(x_max);
        let f_hi = cfg.bessel_j(order, hi)?;
        if f_hi == T::zero() {
            zeros.push(hi);
        } else if f_lo != T::zero() && (f_lo < T::zero()) != (f_hi < T::zero()) {
            zeros.push(bisect(&cfg, order, lo, hi, f_lo)?);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(zeros)
}

fn bisect<T: Real>(cfg: &SpecFunConfig<T>, order: T, mut a: T, mut b: T, mut fa: T) -> Result<T> {
    for _ in 0..200 {
        let m = (a + b) * c(0.5);
        if m <= a || m >= b {
            break;
        }
        let fm = cfg.bessel_j(order, m)?;
        if fm == T::zero() {
            return Ok(m);
        }
        if (fm < T::zero()) == (fa < T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok((a + b) * c(0.5))
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd<T> {
    hi: T,
    lo: T,
}

impl<T: Real> From<T> for Dd<T> {
    fn from(hi: T) -> Self {
        Dd { hi, lo: T::zero() }
    }
}

impl<T: Real> Dd<T> {
    fn quick_two_sum(a: T, b: T) -> Self {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn from_sum(a: T, b: T) -> Self {
        let s = a + b;
        let bb = s - a;
        Dd {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    /// Veltkamp split: `a = hi + lo` with both halves fitting in half a mantissa.
    fn split(a: T) -> (T, T) {
        let digits = (-T::epsilon().log2()).round() + T::one();
        let splitter = c::<T>(2.0).powf((digits * c(0.5)).ceil()) + T::one();
        let t = splitter * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }

    /// Dekker's exact product.
    fn from_prod(a: T, b: T) -> Self {
        let p = a * b;
        let (ah, al) = Self::split(a);
        let (bh, bl) = Self::split(b);
        let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
        Dd { hi: p, lo: err }
    }

    fn add(self, o: Self) -> Self {
        let s = Self::from_sum(self.hi, o.hi);
        Self::quick_two_sum(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul(self, o: Self) -> Self {
        let p = Self::from_prod(self.hi, o.hi);
        Self::quick_two_sum(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi)
    }

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from(q1)).neg());
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::from(q2)).neg());
        let q3 = r.hi / o.hi;
        Self::quick_two_sum(q1, q2).add(Dd::from(q3))
    }

    fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn scale(self, s: T) -> Self {
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }
}
