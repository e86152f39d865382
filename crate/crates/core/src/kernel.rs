//! The Bochner-Riesz convolution kernel.
//!
//! `K^R(z) = R^n c(alpha, n) J_lambda(R|z|) / (R|z|)^lambda` with
//! `lambda = alpha + n/2` and `c(alpha, n) = 2^alpha Gamma(alpha+1) (2 pi)^{-n/2}`,
//! which makes `K^R` the inverse transform of `(1 - |y|^2/R^2)_+^alpha` under
//! the conventions of [`crate::spectral`]. Far from the origin
//! `|K^R(r)| ~ A r^{-beta} |cos(R r - phase)|` with `beta = (n+1)/2 + alpha`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{convolve_direct, Grid, GridFunction};
use crate::quad::integrate;
use crate::scalar::{c, from_usize, pairwise_sum, Real};
use crate::specfun::{bessel_ratio, bessel_zeros, gamma};
use crate::spectral::{inverse_ft, DualGrid, Spectrum, Symbol};

/// Largest grid accepted by [`bochner_riesz_direct`].
pub const DIRECT_MAX_NODES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec<T> {
    alpha: T,
    dim: usize,
    radius: T,
}

impl<T: Real> KernelSpec<T> {
    pub fn new(alpha: T, dim: usize, radius: T) -> Result<Self> {
        if !(alpha > -T::one()) || !alpha.is_finite() {
            return Err(Error::domain("KernelSpec", format!("alpha must be > -1, got {alpha}")));
        }
        if !(1..=3).contains(&dim) {
            return Err(Error::domain("KernelSpec", format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::domain("KernelSpec", format!("R must be > 0, got {radius}")));
        }
        let spec = Self { alpha, dim, radius };
        if spec.lambda() < T::zero() {
            return Err(Error::domain(
                "KernelSpec",
                format!("Bessel order lambda = alpha + n/2 = {} must be >= 0", spec.lambda()),
            ));
        }
        Ok(spec)
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn with_radius(&self, radius: T) -> Result<Self> {
        Self::new(self.alpha, self.dim, radius)
    }

    fn n(&self) -> T {
        from_usize(self.dim)
    }

    /// Bessel order `alpha + n/2`.
    pub fn lambda(&self) -> T {
        self.alpha + self.n() * c(0.5)
    }

    /// Decay exponent `(n+1)/2 + alpha`.
    pub fn decay_exponent(&self) -> T {
        (self.n() + T::one()) * c(0.5) + self.alpha
    }

    /// `n / ((n+1)/2 + alpha)`: `||K||_q` is finite iff `q > q0`.
    pub fn q0(&self) -> T {
        self.n() / self.decay_exponent()
    }

    /// `(n - 1) / 2`.
    pub fn critical_alpha(&self) -> T {
        (self.n() - T::one()) * c(0.5)
    }

    /// Whether `K` is absolutely integrable, i.e. `alpha > (n-1)/2`.
    pub fn is_integrable(&self) -> bool {
        self.alpha > self.critical_alpha()
    }

    /// `2^alpha Gamma(alpha+1) (2 pi)^{-n/2}`.
    pub fn norm_const(&self) -> T {
        c::<T>(2.0).powf(self.alpha)
            * gamma(self.alpha + T::one()).expect("alpha > -1")
            * T::TAU().powf(-self.n() * c(0.5))
    }

    /// Asymptotic amplitude `A` in `|K^R(r)| ~ A r^{-beta} |cos(.)|`.
    pub fn envelope_amplitude(&self) -> T {
        self.norm_const() * (c::<T>(2.0) / T::PI()).sqrt() * self.radius.powf(self.n() - self.decay_exponent())
    }

    pub fn symbol(&self) -> Symbol<T> {
        Symbol::BochnerRiesz {
            alpha: self.alpha,
            radius: self.radius,
        }
    }
}

/// `K^R` at distance `r` from the origin.
pub fn kernel_eval_radial<T: Real>(spec: &KernelSpec<T>, r: T) -> T {
    let rn = spec.radius.powi(spec.dim as i32);
    rn * spec.norm_const() * bessel_ratio(spec.lambda(), spec.radius * r.abs()).expect("lambda >= 0 and x >= 0")
}

/// `K^R(z)`.
pub fn kernel_eval<T: Real>(spec: &KernelSpec<T>, z: &[T]) -> T {
    let r = z.iter().fold(T::zero(), |s, &v| s + v * v).sqrt();
    kernel_eval_radial(spec, r)
}

/// Closed-form kernel at every grid node.
pub fn kernel_sample<T: Real>(spec: &KernelSpec<T>, grid: &Grid<T>) -> Result<GridFunction<T>> {
    check_dim(spec, grid)?;
    GridFunction::from_fn(grid.clone(), |z| Complex::new(kernel_eval(spec, z), T::zero()))
}

/// Inverse lattice transform of the symbol `(1 - |y|^2/R^2)_+^alpha` on `grid`'s dual.
pub fn kernel_from_symbol<T: Real>(spec: &KernelSpec<T>, grid: &Grid<T>) -> Result<GridFunction<T>> {
    check_dim(spec, grid)?;
    let dual = DualGrid::new(grid.clone());
    dual.check_radius(spec.radius)?;
    let symbol = spec.symbol();
    let s = Spectrum::from_fn(dual, |y| {
        let rho = y.iter().fold(T::zero(), |s, &v| s + v * v).sqrt();
        Complex::new(symbol.eval(rho), T::zero())
    });
    inverse_ft(&s)
}

fn check_dim<T: Real>(spec: &KernelSpec<T>, grid: &Grid<T>) -> Result<()> {
    if spec.dim != grid.dim() {
        return Err(Error::GridMismatch(format!(
            "kernel dimension {} does not match grid dimension {}",
            spec.dim,
            grid.dim()
        )));
    }
    Ok(())
}

/// `B_R^alpha f = f * K^R` by direct quadrature on the grid.
pub fn bochner_riesz_direct<T: Real>(f: &GridFunction<T>, spec: &KernelSpec<T>) -> Result<GridFunction<T>> {
    let n = f.grid().len();
    if n > DIRECT_MAX_NODES {
        return Err(Error::SizeGuard(format!(
            "direct convolution refuses {n} nodes (limit {DIRECT_MAX_NODES})"
        )));
    }
    let k = kernel_sample(spec, f.grid())?;
    convolve_direct(f, &k)
}

/// `max |K^R(r)| r^beta` over `samples` log-spaced radii in `[r_lo, r_hi]`.
pub fn envelope_max<T: Real>(spec: &KernelSpec<T>, r_lo: T, r_hi: T, samples: usize) -> T {
    let beta = spec.decay_exponent();
    let (a, b) = (r_lo.ln(), r_hi.ln());
    let last = from_usize::<T>(samples.max(2) - 1);
    (0..samples.max(2))
        .map(|i| {
            let r = (a + (b - a) * from_usize::<T>(i) / last).exp();
            kernel_eval_radial(spec, r).abs() * r.powf(beta)
        })
        .fold(T::zero(), |m, v| m.max(v))
}

/// Controls for [`kernel_lq_norm_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LqOptions<T> {
    /// Radius where panel quadrature stops; `None` uses `max(200, 50/(q - q0))`.
    pub r_cut: Option<T>,
    /// Relative tolerance per panel.
    pub rel_tol: T,
}

impl<T: Real> Default for LqOptions<T> {
    fn default() -> Self {
        Self {
            r_cut: None,
            rel_tol: c(1e-10),
        }
    }
}

/// `||K^R||_q` with the pieces that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct LqNorm<T> {
    pub norm: T,
    /// Absolute error estimate on `norm`.
    pub error: T,
    /// `sigma_{n-1} int_0^{r_cut} |K|^q r^{n-1} dr`.
    pub quadrature: T,
    /// Mean-value estimate of the integral beyond `r_cut`.
    pub tail: T,
    /// Same tail with `|cos|^q` replaced by 1 and the fitted envelope: an upper bound.
    pub tail_envelope_bound: T,
    pub envelope_fit: T,
    pub envelope_analytic: T,
    pub r_cut: T,
    pub panels: usize,
}

pub fn kernel_lq_norm<T: Real>(spec: &KernelSpec<T>, q: T) -> Result<LqNorm<T>> {
    kernel_lq_norm_with(spec, q, LqOptions::default())
}

pub fn kernel_lq_norm_with<T: Real>(spec: &KernelSpec<T>, q: T, opts: LqOptions<T>) -> Result<LqNorm<T>> {
    let q0 = spec.q0();
    if q.is_nan() || q <= q0 || q < T::one() {
        return Err(Error::domain(
            "kernel_lq_norm",
            format!("need q > q0 = {q0} and q >= 1, got q = {q}: ||K||_q = inf otherwise"),
        ));
    }
    let peak = kernel_eval_radial(spec, T::zero()).abs();
    let analytic = spec.envelope_amplitude();
    if q.is_infinite() {
        return Ok(LqNorm {
            norm: peak,
            error: T::zero(),
            quadrature: peak,
            tail: T::zero(),
            tail_envelope_bound: T::zero(),
            envelope_fit: analytic,
            envelope_analytic: analytic,
            r_cut: T::zero(),
            panels: 0,
        });
    }
    let r_cut = opts
        .r_cut
        .unwrap_or_else(|| c::<T>(200.0).max(c::<T>(50.0) / (q - q0)));
    let radius = spec.radius;
    let mut breaks = vec![T::zero()];
    breaks.extend(
        bessel_zeros(spec.lambda(), radius * r_cut)?
            .into_iter()
            .map(|x| x / radius)
            .filter(|&r| r < r_cut),
    );
    breaks.push(r_cut);

    let dim = spec.dim as i32;
    let integrand = |r: T| kernel_eval_radial(spec, r).abs().powf(q) * r.powi(dim - 1);
    // Scale for the absolute tolerance: |K|^q near the peak times the first panel.
    let abs_tol = peak.powf(q) * breaks[1].powi(dim) * c(1e-14);
    let pieces: Vec<(T, T)> = breaks
        .par_windows(2)
        .map(|w| {
            let res = integrate(&integrand, w[0], w[1], abs_tol, opts.rel_tol, 30);
            (res.value, res.error)
        })
        .collect();
    let sigma = sphere_area::<T>(spec.dim);
    let values: Vec<T> = pieces.iter().map(|p| p.0).collect();
    let errors: Vec<T> = pieces.iter().map(|p| p.1).collect();
    let quadrature = sigma * pairwise_sum(&values);
    let quad_err = sigma * pairwise_sum(&errors);

    let beta = spec.decay_exponent();
    let n = from_usize::<T>(spec.dim);
    let s = beta * q - n;
    let envelope_fit = envelope_max(spec, r_cut * c(0.5), r_cut, 4096);
    let power_tail = r_cut.powf(-s) / s;
    let tail = sigma * mean_abs_cos_pow(q) * analytic.powf(q) * power_tail;
    let tail_envelope_bound = sigma * envelope_fit.max(analytic).powf(q) * power_tail;
    // Residual of the mean-value replacement: one period at the cut plus the
    // O(x^-2) amplitude correction of the Hankel expansion.
    let mu = c::<T>(4.0) * spec.lambda() * spec.lambda();
    let x_cut = radius * r_cut;
    let tail_err = sigma * analytic.powf(q) * r_cut.powf(n - T::one() - beta * q) * (T::PI() / radius)
        + tail * (mu + T::one()) / (x_cut * x_cut);

    let total = quadrature + tail;
    let norm = total.powf(q.recip());
    let error = norm * (quad_err + tail_err) / (q * total);
    Ok(LqNorm {
        norm,
        error,
        quadrature,
        tail,
        tail_envelope_bound,
        envelope_fit,
        envelope_analytic: analytic,
        r_cut,
        panels: breaks.len() - 1,
    })
}

/// `int w(|v|) |K(v)| dv` for a weight bounded by `weight_sup`, `+inf` when
/// `K` is not absolutely integrable.
///
/// Panels between Bessel zeros up to `r = 200 / R`; beyond, `w` is replaced
/// by its bound and `|K|` by its mean envelope.
pub fn kernel_weighted_l1<T: Real>(spec: &KernelSpec<T>, weight: impl Fn(T) -> T + Sync, weight_sup: T) -> Result<T> {
    if !spec.is_integrable() {
        return Ok(T::infinity());
    }
    let radius = spec.radius;
    let r_cut = c::<T>(200.0) / radius;
    let mut breaks = vec![T::zero()];
    breaks.extend(
        bessel_zeros(spec.lambda(), radius * r_cut)?
            .into_iter()
            .map(|x| x / radius)
            .filter(|&r| r < r_cut),
    );
    breaks.push(r_cut);
    let dim = spec.dim as i32;
    let integrand = |r: T| weight(r) * kernel_eval_radial(spec, r).abs() * r.powi(dim - 1);
    let peak = kernel_eval_radial(spec, T::zero()).abs();
    let abs_tol = weight_sup * peak * breaks[1].powi(dim) * c(1e-12);
    let pieces: Vec<T> = breaks
        .par_windows(2)
        .map(|w| integrate(&integrand, w[0], w[1], abs_tol, c(1e-9), 24).value)
        .collect();
    let sigma = sphere_area::<T>(spec.dim);
    let n = from_usize::<T>(spec.dim);
    let s = spec.decay_exponent() - n;
    let tail = weight_sup * mean_abs_cos_pow(T::one()) * spec.envelope_amplitude() * r_cut.powf(-s) / s;
    Ok(sigma * (pairwise_sum(&pieces) + tail))
}

/// `(||K||_q / |K(0)|)^q (q - q0)`: the blow-up product in units of the kernel peak.
pub fn blow_up_product<T: Real>(spec: &KernelSpec<T>, q: T) -> Result<T> {
    let norm = kernel_lq_norm(spec, q)?.norm;
    let peak = kernel_eval_radial(spec, T::zero()).abs();
    Ok((norm / peak).powf(q) * (q - spec.q0()))
}

/// Surface area of the unit sphere in R^n (the two-point "sphere" for n = 1).
pub fn sphere_area<T: Real>(dim: usize) -> T {
    let half_n = from_usize::<T>(dim) * c(0.5);
    c::<T>(2.0) * T::PI().powf(half_n) / gamma(half_n).expect("n >= 1")
}

/// Mean of `|cos t|^q` over a period: `Gamma((q+1)/2) / (sqrt(pi) Gamma(q/2 + 1))`.
pub fn mean_abs_cos_pow<T: Real>(q: T) -> T {
    let half = c::<T>(0.5);
    gamma((q + T::one()) * half).expect("q > -1") / (T::PI().sqrt() * gamma(q * half + T::one()).expect("q > -2"))
}
