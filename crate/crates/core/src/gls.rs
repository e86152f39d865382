//! Grand Lebesgue Space norms and the exponent bookkeeping around the
//! Bochner-Riesz `L_p -> L_r` bound.
//!
//! Notation: `q0 = n/((n+1)/2 + alpha)`, `q(p, r) = pr/(pr + p - r)` and
//! `W(alpha, n, R; p, r) = R^{n(1/p - 1/r)} (q - q0)^{1/p - 1 - 1/r}`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{lp_norm, GridFunction};
use crate::scalar::{c, from_usize, Real};

/// Distance kept from the endpoints of every open interval that is sampled.
pub const ENDPOINT_GAP: f64 = 1e-6;
/// Upper cap of the p-grid when the support is unbounded.
pub const DEFAULT_P_MAX: f64 = 64.0;
/// Points in the coarse bracket of [`nu_of`].
pub const NU_BRACKET_POINTS: usize = 2001;

/// A positive generating function `psi` on `(a, b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratingFunction<T> {
    /// `p^{1/m}` on `[1, inf)`.
    Power { m: T },
    /// `(p - a)^{-alpha} (b - p)^{-beta}` on `(a, b)`.
    IwaniecSbordone { a: T, b: T, alpha: T, beta: T },
    /// Linear interpolation of `values` over the increasing nodes `p`.
    Tabulated { p: Vec<T>, values: Vec<T> },
    /// 1 at `p = r`, `+inf` elsewhere: the space is plain `L_r`.
    SinglePoint { r: T },
}

impl<T: Real> GeneratingFunction<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match self {
            Self::Power { m } => {
                if !(*m > T::zero()) || !m.is_finite() {
                    return bad(format!("power generating function needs m > 0, got {m}"));
                }
            }
            Self::IwaniecSbordone { a, b, alpha, beta } => {
                if !(*a >= T::one()) || !(*b > *a) || !b.is_finite() {
                    return bad(format!("need 1 <= a < b < inf, got a = {a}, b = {b}"));
                }
                if !(*alpha >= T::zero()) || !(*beta >= T::zero()) || !alpha.is_finite() || !beta.is_finite() {
                    return bad(format!(
                        "exponents must be >= 0 so that inf psi > 0, got alpha = {alpha}, beta = {beta}"
                    ));
                }
            }
            Self::Tabulated { p, values } => {
                if p.len() < 2 || p.len() != values.len() {
                    return bad("tabulated psi needs matching node and value lists of length >= 2".into());
                }
                if !(p[0] >= T::one()) || p.windows(2).any(|w| !(w[1] > w[0])) || !p[p.len() - 1].is_finite() {
                    return bad("tabulated p nodes must be finite, >= 1 and strictly increasing".into());
                }
                if values.iter().any(|v| !(*v > T::zero()) || !v.is_finite()) {
                    return bad("tabulated psi values must be finite and > 0".into());
                }
            }
            Self::SinglePoint { r } => {
                if !(*r >= T::one()) || !r.is_finite() {
                    return bad(format!("single-point psi needs finite r >= 1, got {r}"));
                }
            }
        }
        Ok(())
    }

    /// `(a, b)`; the degenerate `(r, r)` for [`GeneratingFunction::SinglePoint`].
    pub fn support(&self) -> (T, T) {
        match self {
            Self::Power { .. } => (T::one(), T::infinity()),
            Self::IwaniecSbordone { a, b, .. } => (*a, *b),
            Self::Tabulated { p, .. } => (p[0], p[p.len() - 1]),
            Self::SinglePoint { r } => (*r, *r),
        }
    }

    /// `psi(p)`, `+inf` outside the support.
    pub fn eval(&self, p: T) -> T {
        let inf = T::infinity();
        if p.is_nan() {
            return inf;
        }
        match self {
            Self::Power { m } => {
                if p < T::one() || p.is_infinite() {
                    inf
                } else {
                    p.powf(m.recip())
                }
            }
            Self::IwaniecSbordone { a, b, alpha, beta } => {
                if p <= *a || p >= *b {
                    inf
                } else {
                    (p - *a).powf(-*alpha) * (*b - p).powf(-*beta)
                }
            }
            Self::Tabulated { p: nodes, values } => {
                let last = nodes.len() - 1;
                if p < nodes[0] || p > nodes[last] {
                    return inf;
                }
                let k = nodes.partition_point(|&x| x <= p).clamp(1, last);
                let t = (p - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
                values[k - 1] + t * (values[k] - values[k - 1])
            }
            Self::SinglePoint { r } => {
                if p == *r {
                    T::one()
                } else {
                    inf
                }
            }
        }
    }
}

pub fn psi_eval<T: Real>(gf: &GeneratingFunction<T>, p: T) -> T {
    gf.eval(p)
}

/// A sampled supremum `sup_p ||f||_p / psi(p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport<T> {
    pub norm: T,
    /// Exponent where the sampled sup was attained.
    pub argmax: T,
    /// `(p, ||f||_p / psi(p))` for every sample.
    pub trace: Vec<(T, T)>,
    /// False when the sup still grew over the last quarter of the p-grid.
    pub stabilized: bool,
}

/// Log-spaced exponents in `(a, b)` kept `ENDPOINT_GAP` from each end; `b = inf`
/// is capped at `p_max`.
pub fn p_grid<T: Real>(a: T, b: T, samples: usize, p_max: T) -> Result<Vec<T>> {
    let gap: T = c(ENDPOINT_GAP);
    let lo = a + gap;
    let hi = if b.is_finite() { b - gap } else { p_max };
    if samples < 2 || !(hi > lo) {
        return Err(Error::EmptyInterval(format!("no exponents in ({lo}, {hi})")));
    }
    let (l, h) = (lo.ln(), hi.ln());
    let last = from_usize::<T>(samples - 1);
    Ok((0..samples)
        .map(|i| match i {
            0 => lo,
            i if i == samples - 1 => hi,
            _ => (l + (h - l) * from_usize::<T>(i) / last).exp(),
        })
        .collect())
}

/// `||f||_{G psi}` sampled on `p_samples` exponents (at least 16).
pub fn gls_norm<T: Real>(f: &GridFunction<T>, gf: &GeneratingFunction<T>, p_samples: usize) -> Result<NormReport<T>> {
    gf.validate()?;
    if p_samples < 16 {
        return Err(Error::domain("gls_norm", format!("need at least 16 p samples, got {p_samples}")));
    }
    if let GeneratingFunction::SinglePoint { r } = gf {
        let v = lp_norm(f, *r)?;
        return Ok(NormReport {
            norm: v,
            argmax: *r,
            trace: vec![(*r, v)],
            stabilized: true,
        });
    }
    let (a, b) = gf.support();
    let ps = p_grid(a, b, p_samples, c(DEFAULT_P_MAX))?;
    gls_norm_sampled(f, &ps, |p| gf.eval(p))
}

/// `sup` of `||f||_p / psi(p)` over the given exponents.
pub fn gls_norm_sampled<T: Real>(f: &GridFunction<T>, ps: &[T], psi: impl Fn(T) -> T + Sync) -> Result<NormReport<T>> {
    let trace = ps
        .par_iter()
        .map(|&p| Ok((p, lp_norm(f, p)? / psi(p))))
        .collect::<Result<Vec<(T, T)>>>()?;
    sup_report(trace)
}

/// Wrap precomputed `(p, ratio)` pairs into a report.
pub fn sup_report<T: Real>(trace: Vec<(T, T)>) -> Result<NormReport<T>> {
    if trace.is_empty() {
        return Err(Error::EmptyInterval("no samples for the supremum".into()));
    }
    let mut best = 0;
    for (i, &(_, v)) in trace.iter().enumerate() {
        if v > trace[best].1 {
            best = i;
        }
    }
    let split = trace.len() - trace.len() / 4;
    let head = trace[..split].iter().fold(T::zero(), |m, &(_, v)| m.max(v));
    let stabilized = trace[best].1 <= head * (T::one() + c(1e-3));
    Ok(NormReport {
        norm: trace[best].1,
        argmax: trace[best].0,
        trace,
        stabilized,
    })
}

/// `n / ((n+1)/2 + alpha)`.
pub fn q0_of<T: Real>(alpha: T, n: usize) -> T {
    let n = from_usize::<T>(n);
    n / ((n + T::one()) * c(0.5) + alpha)
}

/// `pr / (pr + p - r)`, the kernel exponent pairing `L_p` with `L_r`.
pub fn q_of<T: Real>(p: T, r: T) -> T {
    if r.is_infinite() {
        return p / (p - T::one());
    }
    p * r / (p * r + p - r)
}

/// `(1 - 1/q0)^{-1}`, read as `+inf` when `q0 <= 1`.
pub fn p0_of<T: Real>(q0: T) -> T {
    if q0 <= T::one() {
        T::infinity()
    } else {
        (T::one() - q0.recip()).recip()
    }
}

/// `p q0 / (p + q0 - p q0)`, read as `+inf` when the denominator is `<= 0`
/// and taken as the limit when `p = inf`.
pub fn r0_of<T: Real>(q0: T, p: T) -> T {
    if p.is_infinite() {
        return if q0 < T::one() { q0 / (T::one() - q0) } else { T::infinity() };
    }
    let den = p + q0 - p * q0;
    if den <= T::zero() {
        T::infinity()
    } else {
        p * q0 / den
    }
}

/// The exponent bundle around `W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams<T> {
    pub alpha: T,
    pub n: usize,
    pub p: T,
    pub r: T,
    pub q: T,
    pub q0: T,
    pub r0: T,
    pub p0: T,
    /// `min{b, r q0/(r q0 + q0 - r)}`, the upper end of the `p` range in `nu`.
    pub s: T,
    /// `r0` evaluated at `p = b`: `nu(r)` is defined for `r > d`.
    pub d: T,
}

impl<T: Real> BoundParams<T> {
    /// Derived quantities for `(p, r)` with the generating-function support ending at `b`.
    pub fn new(alpha: T, n: usize, p: T, r: T, b: T) -> Self {
        let q0 = q0_of(alpha, n);
        let s_den = r * q0 + q0 - r;
        let s_formula = if s_den > T::zero() { r * q0 / s_den } else { T::infinity() };
        Self {
            alpha,
            n,
            p,
            r,
            q: q_of(p, r),
            q0,
            r0: r0_of(q0, p),
            p0: p0_of(q0),
            s: b.min(s_formula),
            d: r0_of(q0, b),
        }
    }

    /// Admissibility of `(p, r)`, checked in the order r > p, q > q0, p <= p0, r > r0.
    pub fn check(&self) -> Result<()> {
        if !(self.p >= T::one()) || !(self.r >= T::one()) {
            return Err(Error::domain(
                "BoundParams",
                format!("need p, r >= 1, got p = {}, r = {}", self.p, self.r),
            ));
        }
        if self.r <= self.p {
            return Err(Error::Inadmissible(format!("r <= p (r = {}, p = {})", self.r, self.p)));
        }
        if self.q <= self.q0 {
            return Err(Error::Inadmissible(format!("q <= q0 (q = {}, q0 = {})", self.q, self.q0)));
        }
        if self.p > self.p0 {
            return Err(Error::Inadmissible(format!("p > p0 (p = {}, p0 = {})", self.p, self.p0)));
        }
        if self.r <= self.r0 {
            return Err(Error::Inadmissible(format!("r <= r0 (r = {}, r0 = {})", self.r, self.r0)));
        }
        Ok(())
    }
}

/// `W(alpha, n, R; p, r)`, evaluated through its logarithm.
pub fn w_coeff<T: Real>(alpha: T, n: usize, radius: T, p: T, r: T) -> Result<T> {
    if !(radius > T::zero()) {
        return Err(Error::domain("w_coeff", format!("R must be > 0, got {radius}")));
    }
    if !(alpha > -T::one()) {
        return Err(Error::domain("w_coeff", format!("alpha must be > -1, got {alpha}")));
    }
    let bp = BoundParams::new(alpha, n, p, r, T::infinity());
    bp.check()?;
    Ok(w_unchecked(&bp, radius))
}

fn w_unchecked<T: Real>(bp: &BoundParams<T>, radius: T) -> T {
    let (ip, ir) = (bp.p.recip(), bp.r.recip());
    let n = from_usize::<T>(bp.n);
    (n * (ip - ir) * radius.ln() + (ip - T::one() - ir) * (bp.q - bp.q0).ln()).exp()
}

/// Result of the `nu` minimisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuResult<T> {
    pub value: T,
    pub argmin: T,
    /// Clamped interval actually searched.
    pub lo: T,
    pub hi: T,
}

/// `nu[psi](r) = inf_{p in (a, s)} W(alpha, n, R; p, r) psi(p)`.
pub fn nu_of<T: Real>(gf: &GeneratingFunction<T>, alpha: T, n: usize, radius: T, r: T) -> Result<NuResult<T>> {
    gf.validate()?;
    if let GeneratingFunction::SinglePoint { r: p_star } = gf {
        let bp = BoundParams::new(alpha, n, *p_star, r, T::infinity());
        if !(*p_star < bp.s.min(r)) {
            return Err(Error::EmptyInterval(format!(
                "single point p = {p_star} lies outside (a, s) = ({p_star}, {})",
                bp.s.min(r)
            )));
        }
        return Ok(NuResult {
            value: w_coeff(alpha, n, radius, *p_star, r)?,
            argmin: *p_star,
            lo: *p_star,
            hi: *p_star,
        });
    }
    nu_of_fn(|p| gf.eval(p), gf.support(), alpha, n, radius, r)
}

/// The clamped `p` interval searched by `nu`, after the `r > d` precondition.
pub fn nu_interval<T: Real>(support: (T, T), alpha: T, n: usize, r: T) -> Result<(T, T)> {
    let (a, b) = support;
    let bp = BoundParams::new(alpha, n, a, r, b);
    if !(r > bp.d) {
        return Err(Error::domain("nu_of", format!("need r > d = {}, got r = {r}", bp.d)));
    }
    // r > p is part of admissibility, so the range also stops at r.
    let upper = bp.s.min(r);
    let gap: T = c(ENDPOINT_GAP);
    let (lo, hi) = (a.max(T::one()) + gap, upper - gap);
    if !(upper > a) || !(hi > lo) {
        return Err(Error::EmptyInterval(format!("(a, s) = ({a}, {upper}) is empty")));
    }
    Ok((lo, hi))
}

/// [`nu_of`] for an arbitrary `psi` given with its support.
pub fn nu_of_fn<T: Real>(
    psi: impl Fn(T) -> T + Sync,
    support: (T, T),
    alpha: T,
    n: usize,
    radius: T,
    r: T,
) -> Result<NuResult<T>> {
    let (lo, hi) = nu_interval(support, alpha, n, r)?;
    let g = |p: T| {
        let bp = BoundParams::new(alpha, n, p, r, T::infinity());
        match bp.check() {
            Ok(()) => w_unchecked(&bp, radius) * psi(p),
            Err(_) => T::infinity(),
        }
    };
    let m = NU_BRACKET_POINTS;
    let step = (hi - lo) / from_usize::<T>(m - 1);
    let node = |i: usize| if i == m - 1 { hi } else { lo + step * from_usize::<T>(i) };
    let vals: Vec<T> = (0..m).into_par_iter().map(|i| g(node(i))).collect();
    let mut best = 0;
    for i in 1..m {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    if !vals[best].is_finite() {
        return Err(Error::EmptyInterval(format!("W psi is infinite on all of ({lo}, {hi})")));
    }
    let (mut x0, mut x3) = (node(best.saturating_sub(1)), node((best + 1).min(m - 1)));
    let (mut best_p, mut best_v) = (node(best), vals[best]);
    let invphi: T = c(0.618_033_988_749_894_8);
    let tol: T = c(1e-10);
    let mut x1 = x3 - invphi * (x3 - x0);
    let mut x2 = x0 + invphi * (x3 - x0);
    let (mut f1, mut f2) = (g(x1), g(x2));
    while x3 - x0 > tol * (x0.abs() + x3.abs()) {
        if f1 < f2 {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - invphi * (x3 - x0);
            f1 = g(x1);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + invphi * (x3 - x0);
            f2 = g(x2);
        }
    }
    for (p, v) in [(x1, f1), (x2, f2)] {
        if v < best_v {
            best_p = p;
            best_v = v;
        }
    }
    Ok(NuResult {
        value: best_v,
        argmin: best_p,
        lo,
        hi,
    })
}

/// `C_m = (m^{1/m} / m'^{1/m'})^{1/2}` with `C_1 = C_inf = 1`.
pub fn beckner_constant<T: Real>(m: T) -> Result<T> {
    if !(m >= T::one()) {
        return Err(Error::domain("beckner_constant", format!("need m >= 1, got {m}")));
    }
    if m == T::one() || m.is_infinite() {
        return Ok(T::one());
    }
    let mp = m / (m - T::one());
    Ok(((m.ln() / m - mp.ln() / mp) * c(0.5)).exp())
}

/// Conjugate exponent, with `1' = inf` and `inf' = 1`.
pub fn conjugate<T: Real>(m: T) -> T {
    if m == T::one() {
        T::infinity()
    } else if m.is_infinite() {
        T::one()
    } else {
        m / (m - T::one())
    }
}

/// Sharp Young constant `(C_p C_q / C_r)^n`; requires `1 + 1/r = 1/p + 1/q`.
pub fn young_bound<T: Real>(p: T, q: T, r: T, n: usize) -> Result<T> {
    for (name, v) in [("p", p), ("q", q), ("r", r)] {
        if !(v >= T::one()) {
            return Err(Error::domain("young_bound", format!("need {name} >= 1, got {v}")));
        }
    }
    let gap = T::one() + r.recip() - p.recip() - q.recip();
    if gap.abs() > c(1e-12) {
        return Err(Error::domain(
            "young_bound",
            format!("scaling relation 1 + 1/r = 1/p + 1/q violated by {gap}"),
        ));
    }
    let base = beckner_constant(p)? * beckner_constant(q)? / beckner_constant(r)?;
    Ok(base.powi(n as i32))
}

/// Widths `(a, b)` making `exp(-a|x|^2)`, `exp(-b|x|^2)` an equality pair for
/// the sharp Young inequality: `a q' = b p' = c`.
pub fn extremal_gaussian_widths<T: Real>(p: T, q: T, c0: T) -> Result<(T, T)> {
    if !(p > T::one()) || !(q > T::one()) || !p.is_finite() || !q.is_finite() {
        return Err(Error::domain(
            "extremal_gaussian_widths",
            format!("need 1 < p, q < inf, got p = {p}, q = {q}"),
        ));
    }
    if !(c0 > T::zero()) {
        return Err(Error::domain("extremal_gaussian_widths", format!("need c > 0, got {c0}")));
    }
    Ok((c0 / conjugate(q), c0 / conjugate(p)))
}

/// `(2 pi)^{n(1-p)/(2p)} p^{-n/(2p)}`.
pub fn theta<T: Real>(n: usize, p: T) -> Result<T> {
    if !(p >= T::one()) || n == 0 {
        return Err(Error::domain("theta", format!("need n >= 1 and p >= 1, got n = {n}, p = {p}")));
    }
    let n = from_usize::<T>(n);
    let two_p = p * c(2.0);
    Ok((n * (T::one() - p) / two_p * T::TAU().ln() - n / two_p * p.ln()).exp())
}

/// Result of the `Q_n(p, r)` grid search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport<T> {
    pub max_w: T,
    pub alpha: T,
    pub radius: T,
    /// `Theta(n, q(p, r))`.
    pub theta_reference: T,
    pub exceeds_theta: bool,
    /// The maximiser sits at the smallest or largest `R` of the grid.
    pub on_r_boundary: bool,
    pub admissible_cells: usize,
    pub rejected_cells: usize,
}

/// `max W` over `alpha_grid x r_grid`, ties broken towards the
/// lexicographically smallest `(alpha, R)`.
pub fn qn_lower_search<T: Real>(
    n: usize,
    p: T,
    r: T,
    alpha_grid: &[T],
    r_grid: &[T],
) -> Result<LowerBoundReport<T>> {
    if alpha_grid.is_empty() || r_grid.is_empty() {
        return Err(Error::EmptyInterval("empty alpha or R grid".into()));
    }
    if !(r > p) {
        return Err(Error::Inadmissible(format!("r <= p (r = {r}, p = {p})")));
    }
    let cells: Vec<(T, T)> = alpha_grid
        .iter()
        .flat_map(|&a| r_grid.iter().map(move |&rr| (a, rr)))
        .collect();
    let evaluated: Vec<Option<(T, T, T)>> = cells
        .par_iter()
        .map(|&(a, rr)| w_coeff(a, n, rr, p, r).ok().map(|w| (w, a, rr)))
        .collect();
    let admissible = evaluated.iter().flatten().count();
    let best = evaluated
        .into_par_iter()
        .flatten()
        .reduce_with(|x, y| if better(&y, &x) { y } else { x })
        .ok_or_else(|| Error::Inadmissible("every (alpha, R) cell is inadmissible".into()))?;
    let theta_reference = theta(n, q_of(p, r))?;
    let r_min = r_grid.iter().fold(T::infinity(), |m, &v| m.min(v));
    let r_max = r_grid.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
    Ok(LowerBoundReport {
        max_w: best.0,
        alpha: best.1,
        radius: best.2,
        theta_reference,
        exceeds_theta: best.0 >= theta_reference,
        on_r_boundary: best.2 == r_min || best.2 == r_max,
        admissible_cells: admissible,
        rejected_cells: cells.len() - admissible,
    })
}

fn better<T: Real>(y: &(T, T, T), x: &(T, T, T)) -> bool {
    match y.0.partial_cmp(&x.0) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => (y.1, y.2) < (x.1, x.2),
    }
}
