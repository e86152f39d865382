//! Lattice approximation of the continuous Fourier transform and radial
//! Fourier multipliers.
//!
//! Conventions:
//!
//! ```text
//! forward:  f~(y) = int e^{+i(x,y)} f(x) dx
//! inverse:  g(t)  = (2 pi)^{-n} int e^{-i(t,y)} g(y) dy
//! ```
//!
//! With `y_k = pi k / L` for `k = -M/2 .. M/2-1` the phase `e^{i x_j y_k}`
//! factors as `(-1)^k e^{2 pi i j k / M}`, so both directions are one
//! unnormalized DFT per axis plus a sign flip and an fftshift. With the
//! `(2 pi)^{-n}` carried by the inverse, a multiplier equal to 1 at the
//! origin preserves the integral of its input.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::{ensure_same_grid, Grid, GridFunction, MAX_DIM};
use crate::scalar::{c, from_usize, Real};

/// Symbols must vanish outside `NYQUIST_FRACTION` of the Nyquist radius.
pub const NYQUIST_FRACTION: f64 = 0.9;

/// Frequency lattice dual to a primal [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualGrid<T> {
    primal: Grid<T>,
}

impl<T: Real> DualGrid<T> {
    pub fn new(primal: Grid<T>) -> Self {
        Self { primal }
    }

    pub fn primal(&self) -> &Grid<T> {
        &self.primal
    }

    pub fn dim(&self) -> usize {
        self.primal.dim()
    }

    /// Dual spacing `pi / L_axis`.
    pub fn spacing(&self, axis: usize) -> T {
        T::PI() / self.primal.half_extent()[axis]
    }

    /// Frequency at natural-order index `i`, i.e. `k = i - M/2`.
    pub fn frequency(&self, axis: usize, i: usize) -> T {
        let m = self.primal.points()[axis];
        (from_usize::<T>(i) - from_usize::<T>(m / 2)) * self.spacing(axis)
    }

    /// Smallest per-axis Nyquist frequency `pi M / (2 L)`.
    pub fn nyquist_radius(&self) -> T {
        (0..self.dim())
            .map(|a| T::PI() * from_usize::<T>(self.primal.points()[a]) / (c::<T>(2.0) * self.primal.half_extent()[a]))
            .fold(T::infinity(), |m, v| m.min(v))
    }

    /// Largest symbol support radius accepted by [`apply_multiplier`].
    pub fn max_symbol_radius(&self) -> T {
        self.nyquist_radius() * c(NYQUIST_FRACTION)
    }

    /// `|y|` at every dual node, row-major natural order.
    pub fn radii(&self) -> Vec<T> {
        let dim = self.dim();
        (0..self.primal.len())
            .map(|flat| {
                let idx = self.primal.unravel(flat);
                (0..dim)
                    .map(|a| {
                        let y = self.frequency(a, idx[a]);
                        y * y
                    })
                    .fold(T::zero(), |s, v| s + v)
                    .sqrt()
            })
            .collect()
    }

    pub fn check_radius(&self, radius: T) -> Result<()> {
        let limit = self.max_symbol_radius();
        if radius > limit {
            return Err(Error::Nyquist {
                radius: radius.to_f64_lossy(),
                limit: limit.to_f64_lossy(),
                nyquist: self.nyquist_radius().to_f64_lossy(),
            });
        }
        Ok(())
    }
}

/// Samples of a transform on a [`DualGrid`], natural (centred) order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    dual: DualGrid<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(dual: DualGrid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != dual.primal().len() {
            return Err(Error::GridMismatch(format!(
                "dual grid has {} nodes but {} values were given",
                dual.primal().len(),
                values.len()
            )));
        }
        Ok(Self { dual, values })
    }

    /// Samples `g(y)` at every dual node.
    pub fn from_fn(dual: DualGrid<T>, g: impl Fn(&[T]) -> Complex<T>) -> Self {
        let dim = dual.dim();
        let values = (0..dual.primal().len())
            .map(|flat| {
                let idx = dual.primal().unravel(flat);
                let y: Vec<T> = (0..dim).map(|a| dual.frequency(a, idx[a])).collect();
                g(&y)
            })
            .collect();
        Self { dual, values }
    }

    pub fn dual(&self) -> &DualGrid<T> {
        &self.dual
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn value_at_origin(&self) -> Complex<T> {
        self.values[self.dual.primal().origin_index()]
    }

    /// `(prod kappa_i * sum |g_k|^2)`, the dual-lattice L2 norm squared.
    pub fn l2_norm_squared(&self) -> T {
        let vol = (0..self.dual.dim()).fold(T::one(), |v, a| v * self.dual.spacing(a));
        let s = crate::scalar::pairwise_sum_by(&self.values, &|v: &Complex<T>| v.norm_sqr());
        s * vol
    }

    /// Pointwise product with a radial symbol, after the Nyquist check.
    pub fn multiply(&self, symbol: &Symbol<T>) -> Result<Self> {
        symbol.validate()?;
        if let Some(r) = symbol.support_radius() {
            self.dual.check_radius(r)?;
        }
        let radii = self.dual.radii();
        let values = self
            .values
            .iter()
            .zip(&radii)
            .map(|(v, &rho)| v * symbol.eval(rho))
            .collect();
        Ok(Self {
            dual: self.dual.clone(),
            values,
        })
    }
}

/// Radial multiplier symbols.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol<T> {
    Identity,
    /// `(1 - |y|^2/R^2)_+^alpha`.
    BochnerRiesz { alpha: T, radius: T },
    /// `(1 - |y|^2/R^2)^{R^2/2}` on `|y| < R`, tending to `e^{-|y|^2/2}`.
    GaussianLimit { radius: T },
    /// Piecewise-linear profile in `|y|`, zero beyond the last radius.
    Tabulated { radii: Vec<T>, values: Vec<T> },
}

impl<T: Real> Symbol<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            Symbol::Identity => Ok(()),
            Symbol::BochnerRiesz { alpha, radius } => {
                if !(*alpha > -T::one()) {
                    return Err(Error::domain("bochner_riesz", format!("alpha must be > -1, got {alpha}")));
                }
                positive_radius(*radius)
            }
            Symbol::GaussianLimit { radius } => positive_radius(*radius),
            Symbol::Tabulated { radii, values } => {
                if radii.is_empty() || radii.len() != values.len() {
                    return Err(Error::domain("tabulated symbol", "radii and values must be nonempty and equally long"));
                }
                if radii[0] < T::zero() || radii.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::domain("tabulated symbol", "radii must be nonnegative and strictly increasing"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::domain("tabulated symbol", "values must be finite"));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, rho: T) -> T {
        match self {
            Symbol::Identity => T::one(),
            Symbol::BochnerRiesz { alpha, radius } => {
                let u = T::one() - (rho / *radius) * (rho / *radius);
                if u > T::zero() {
                    if *alpha == T::zero() {
                        T::one()
                    } else {
                        u.powf(*alpha)
                    }
                } else if u == T::zero() && *alpha == T::zero() {
                    // Midpoint of the jump, the value Fourier inversion converges to.
                    c(0.5)
                } else {
                    T::zero()
                }
            }
            Symbol::GaussianLimit { radius } => {
                if rho < *radius {
                    let s = rho / *radius;
                    let exponent = *radius * *radius * c(0.5);
                    (exponent * (-s * s).ln_1p()).exp()
                } else {
                    T::zero()
                }
            }
            Symbol::Tabulated { radii, values } => {
                let last = radii.len() - 1;
                if rho > radii[last] {
                    return T::zero();
                }
                if rho <= radii[0] {
                    return values[0];
                }
                let i = radii.partition_point(|&r| r < rho);
                let (r0, r1) = (radii[i - 1], radii[i]);
                let w = (rho - r0) / (r1 - r0);
                values[i - 1] * (T::one() - w) + values[i] * w
            }
        }
    }

    /// Radius outside which the symbol vanishes, `None` if unbounded.
    pub fn support_radius(&self) -> Option<T> {
        match self {
            Symbol::Identity => None,
            Symbol::BochnerRiesz { radius, .. } | Symbol::GaussianLimit { radius } => Some(*radius),
            Symbol::Tabulated { radii, .. } => radii.last().copied(),
        }
    }
}

fn positive_radius<T: Real>(r: T) -> Result<()> {
    if r > T::zero() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("symbol", format!("radius must be > 0, got {r}")))
    }
}

/// FFT plans for one grid shape. Plans are immutable and shareable across threads.
pub struct FourierTransform<T: Real> {
    grid: Grid<T>,
    forward_plans: Vec<Arc<dyn Fft<T>>>,
    inverse_plans: Vec<Arc<dyn Fft<T>>>,
}

impl<T: Real> FourierTransform<T> {
    pub fn new(grid: &Grid<T>) -> Self {
        let mut planner = FftPlanner::new();
        let forward_plans = grid.points().iter().map(|&m| planner.plan_fft_forward(m)).collect();
        let inverse_plans = grid.points().iter().map(|&m| planner.plan_fft_inverse(m)).collect();
        Self {
            grid: grid.clone(),
            forward_plans,
            inverse_plans,
        }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn dual(&self) -> DualGrid<T> {
        DualGrid::new(self.grid.clone())
    }

    /// `f~(y_k) = prod h_i * sum_j f(x_j) e^{i(x_j, y_k)}`.
    pub fn forward(&self, f: &GridFunction<T>) -> Result<Spectrum<T>> {
        ensure_same_grid(&self.grid, f.grid())?;
        let mut data = f.values().to_vec();
        // e^{+2 pi i jk/M} is rustfft's inverse direction.
        for (axis, plan) in self.inverse_plans.iter().enumerate() {
            fft_along_axis(&mut data, self.grid.shape3(), axis, plan);
        }
        let scale = self.grid.cell_volume();
        let values = self.centre(&data, scale);
        Ok(Spectrum {
            dual: self.dual(),
            values,
        })
    }

    /// `g(t_j) = (2 pi)^{-n} prod kappa_i * sum_k g(y_k) e^{-i(t_j, y_k)}`.
    pub fn inverse(&self, s: &Spectrum<T>) -> Result<GridFunction<T>> {
        ensure_same_grid(&self.grid, s.dual.primal())?;
        // (2 pi)^{-1} * (pi / L) = 1 / (2 L) per axis.
        let scale = self
            .grid
            .half_extent()
            .iter()
            .fold(T::one(), |v, &l| v / (c::<T>(2.0) * l));
        let mut data = self.uncentre(&s.values);
        for (axis, plan) in self.forward_plans.iter().enumerate() {
            fft_along_axis(&mut data, self.grid.shape3(), axis, plan);
        }
        for v in &mut data {
            *v *= scale;
        }
        Ok(GridFunction::from_parts(self.grid.clone(), data))
    }

    /// FFT order -> natural order, applying `prod (-1)^{k_i}` and `scale`.
    fn centre(&self, fft_order: &[Complex<T>], scale: T) -> Vec<Complex<T>> {
        let map = CentreMap::new(&self.grid);
        (0..fft_order.len())
            .map(|nat| {
                let (src, negate) = map.fft_index(nat);
                let v = fft_order[src] * scale;
                if negate {
                    -v
                } else {
                    v
                }
            })
            .collect()
    }

    /// Natural order -> FFT order, applying `prod (-1)^{k_i}`.
    fn uncentre(&self, natural: &[Complex<T>]) -> Vec<Complex<T>> {
        let map = CentreMap::new(&self.grid);
        let mut out = vec![Complex::new(T::zero(), T::zero()); natural.len()];
        for (nat, &v) in natural.iter().enumerate() {
            let (dst, negate) = map.fft_index(nat);
            out[dst] = if negate { -v } else { v };
        }
        out
    }
}

/// Index bookkeeping between natural order (`k = i - M/2`) and FFT order (`k mod M`).
struct CentreMap {
    shape: [usize; MAX_DIM],
}

impl CentreMap {
    fn new<T: Real>(grid: &Grid<T>) -> Self {
        Self { shape: grid.shape3() }
    }

    fn fft_index(&self, nat: usize) -> (usize, bool) {
        let [_, m1, m2] = self.shape;
        let idx = [nat / (m1 * m2), (nat / m2) % m1, nat % m2];
        let mut flat = 0;
        let mut negate = false;
        for (a, &m) in self.shape.iter().enumerate() {
            if m == 1 {
                continue;
            }
            let half = m / 2;
            let fft_i = (idx[a] + half) % m;
            // k = i - M/2 is odd iff i + M/2 is.
            if (idx[a] + half) % 2 == 1 {
                negate = !negate;
            }
            flat = flat * m + fft_i;
        }
        (flat, negate)
    }
}

/// In-place unnormalized FFT of every line along `axis` of a row-major array.
fn fft_along_axis<T: Real>(data: &mut [Complex<T>], shape: [usize; MAX_DIM], axis: usize, plan: &Arc<dyn Fft<T>>) {
    let m = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    if inner == 1 {
        data.par_chunks_mut(m).for_each(|line| plan.process(line));
        return;
    }
    let outer: usize = shape[..axis].iter().product();
    let block = m * inner;
    let src: &[Complex<T>] = data;
    let lines: Vec<Vec<Complex<T>>> = (0..outer * inner)
        .into_par_iter()
        .map(|li| {
            let base = (li / inner) * block + li % inner;
            let mut line: Vec<Complex<T>> = (0..m).map(|k| src[base + k * inner]).collect();
            plan.process(&mut line);
            line
        })
        .collect();
    for (li, line) in lines.into_iter().enumerate() {
        let base = (li / inner) * block + li % inner;
        for (k, v) in line.into_iter().enumerate() {
            data[base + k * inner] = v;
        }
    }
}

pub fn forward_ft<T: Real>(f: &GridFunction<T>) -> Result<Spectrum<T>> {
    FourierTransform::new(f.grid()).forward(f)
}

pub fn inverse_ft<T: Real>(g: &Spectrum<T>) -> Result<GridFunction<T>> {
    FourierTransform::new(g.dual().primal()).inverse(g)
}

/// `inverse_ft(m(|y|) * forward_ft(f))`.
pub fn apply_multiplier<T: Real>(f: &GridFunction<T>, m: &Symbol<T>) -> Result<GridFunction<T>> {
    let ft = FourierTransform::new(f.grid());
    let spec = ft.forward(f)?.multiply(m)?;
    ft.inverse(&spec)
}

/// Bochner-Riesz mean of order `alpha` and radius `radius`.
pub fn bochner_riesz_spectral<T: Real>(f: &GridFunction<T>, alpha: T, radius: T) -> Result<GridFunction<T>> {
    apply_multiplier(f, &Symbol::BochnerRiesz { alpha, radius })
}

/// Bochner-Riesz mean with the order tied to the radius, `alpha = R^2/2`.
pub fn gaussian_limit_operator<T: Real>(f: &GridFunction<T>, radius: T) -> Result<GridFunction<T>> {
    apply_multiplier(f, &Symbol::GaussianLimit { radius })
}

/// Linear (non-circular) convolution via zero padding to twice the extent.
pub fn convolve_spectral<T: Real>(f: &GridFunction<T>, g: &GridFunction<T>) -> Result<GridFunction<T>> {
    ensure_same_grid(f.grid(), g.grid())?;
    let grid = f.grid();
    let padded = grid.padded();
    let embed = |h: &GridFunction<T>| -> GridFunction<T> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); padded.len()];
        let pstr = padded.strides();
        for (flat, &v) in h.values().iter().enumerate() {
            let idx = grid.unravel(flat);
            let pos: usize = (0..grid.dim()).map(|a| (idx[a] + grid.points()[a] / 2) * pstr[a]).sum();
            out[pos] = v;
        }
        GridFunction::from_parts(padded.clone(), out)
    };
    let ft = FourierTransform::new(&padded);
    let a = ft.forward(&embed(f))?;
    let b = ft.forward(&embed(g))?;
    let prod: Vec<_> = a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect();
    let full = ft.inverse(&Spectrum::new(ft.dual(), prod)?)?;
    let pstr = padded.strides();
    let values = (0..grid.len())
        .map(|flat| {
            let idx = grid.unravel(flat);
            let pos: usize = (0..grid.dim()).map(|a| (idx[a] + grid.points()[a] / 2) * pstr[a]).sum();
            full.values()[pos]
        })
        .collect();
    Ok(GridFunction::from_parts(grid.clone(), values))
}
