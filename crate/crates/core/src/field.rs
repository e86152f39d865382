//! Sampled functions on uniform grids over symmetric boxes in R^n.
//!
//! A [`Grid`] covers `prod_i [-L_i, L_i)` with `M_i` nodes per axis at
//! `x_j = -L_i + j h_i`, `h_i = 2 L_i / M_i`. Values are stored row-major
//! (last axis fastest). The origin is always node `M_i / 2` on every axis.
//! Integrals are plain Riemann sums and the function is taken to vanish
//! outside the box.

use num_complex::Complex;
use rand::{Rng, RngExt};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{c, from_usize, pairwise_sum_by, Real};

pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    half_extent: Vec<T>,
    points: Vec<usize>,
}

impl<T: Real> Grid<T> {
    pub fn new(half_extent: Vec<T>, points: Vec<usize>) -> Result<Self> {
        let dim = half_extent.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidGrid(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if points.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "{} half extents but {} point counts",
                dim,
                points.len()
            )));
        }
        if let Some(l) = half_extent.iter().find(|l| !(**l > T::zero()) || !l.is_finite()) {
            return Err(Error::InvalidGrid(format!("half extent must be positive, got {l}")));
        }
        if let Some(m) = points.iter().find(|&&m| m < 8 || m % 2 != 0) {
            return Err(Error::InvalidGrid(format!("points per axis must be even and >= 8, got {m}")));
        }
        Ok(Self {
            half_extent,
            points,
        })
    }

    /// Same extent and resolution on every axis.
    pub fn cube(dim: usize, half_extent: T, points: usize) -> Result<Self> {
        Self::new(vec![half_extent; dim], vec![points; dim])
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn half_extent(&self) -> &[T] {
        &self.half_extent
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn spacing(&self, axis: usize) -> T {
        c::<T>(2.0) * self.half_extent[axis] / from_usize(self.points[axis])
    }

    pub fn spacings(&self) -> Vec<T> {
        (0..self.dim()).map(|a| self.spacing(a)).collect()
    }

    /// Volume element `prod_i h_i`.
    pub fn cell_volume(&self) -> T {
        (0..self.dim()).fold(T::one(), |v, a| v * self.spacing(a))
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn min_half_extent(&self) -> T {
        self.half_extent
            .iter()
            .fold(T::infinity(), |m, &l| m.min(l))
    }

    pub fn coord(&self, axis: usize, j: usize) -> T {
        -self.half_extent[axis] + from_usize::<T>(j) * self.spacing(axis)
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dim()];
        for a in (0..self.dim().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.points[a + 1];
        }
        s
    }

    pub fn unravel(&self, mut flat: usize) -> [usize; MAX_DIM] {
        let mut idx = [0; MAX_DIM];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.points[a];
            flat /= self.points[a];
        }
        idx
    }

    pub fn node(&self, flat: usize) -> Vec<T> {
        let idx = self.unravel(flat);
        (0..self.dim()).map(|a| self.coord(a, idx[a])).collect()
    }

    /// Flat index of the origin node.
    pub fn origin_index(&self) -> usize {
        self.strides()
            .iter()
            .zip(&self.points)
            .map(|(s, m)| s * (m / 2))
            .sum()
    }

    /// Doubles the point count on every axis, keeping the extent.
    pub fn refined(&self) -> Self {
        Self {
            half_extent: self.half_extent.clone(),
            points: self.points.iter().map(|m| 2 * m).collect(),
        }
    }

    /// Doubles both the extent and the point count, keeping the spacing.
    pub fn padded(&self) -> Self {
        Self {
            half_extent: self.half_extent.iter().map(|&l| l * c(2.0)).collect(),
            points: self.points.iter().map(|m| 2 * m).collect(),
        }
    }

    /// Point counts padded to three axes with singleton dimensions.
    pub(crate) fn shape3(&self) -> [usize; MAX_DIM] {
        let mut s = [1; MAX_DIM];
        s[..self.dim()].copy_from_slice(&self.points);
        s
    }
}

/// Complex samples on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    grid: Grid<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(grid: Grid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "grid has {} nodes but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidSpec("grid function values must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        Self::new(grid, values.into_iter().map(|v| Complex::new(v, T::zero())).collect())
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        let values = vec![Complex::new(T::zero(), T::zero()); grid.len()];
        Self { grid, values }
    }

    /// Evaluates `f` at every node.
    pub fn from_fn(grid: Grid<T>, f: impl Fn(&[T]) -> Complex<T> + Sync) -> Result<Self> {
        let values: Vec<_> = (0..grid.len())
            .into_par_iter()
            .map(|i| f(&grid.node(i)))
            .collect();
        Self::new(grid, values)
    }

    /// Wraps values already known to be finite and of the right length.
    pub(crate) fn from_parts(grid: Grid<T>, values: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn value_at_origin(&self) -> Complex<T> {
        self.values[self.grid.origin_index()]
    }

    /// Riemann-sum integral over the box.
    pub fn integral(&self) -> Complex<T> {
        let h = self.grid.cell_volume();
        let re = pairwise_sum_by(&self.values, &|v: &Complex<T>| v.re);
        let im = pairwise_sum_by(&self.values, &|v: &Complex<T>| v.im);
        Complex::new(re * h, im * h)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.im.abs()))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_parts(self.grid.clone(), self.values.iter().map(|v| v * s).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(Self::from_parts(self.grid.clone(), values))
    }
}

pub(crate) fn ensure_same_grid<T: Real>(a: &Grid<T>, b: &Grid<T>) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(format!(
            "extents {:?}/{:?} and points {:?}/{:?} differ",
            a.half_extent(),
            b.half_extent(),
            a.points(),
            b.points()
        )));
    }
    Ok(())
}

/// Closed-form test functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction<T> {
    /// `c1 exp(-c2 |x|^2)`.
    Gaussian { c1: T, c2: T },
    /// Indicator of the half-open cube `prod_i [corner_i, corner_i + side)`.
    BoxIndicator { corner: Vec<T>, side: T },
    /// `exp(-1 / (1 - |x|^2/radius^2))` inside the ball, zero outside.
    SmoothBump { radius: T },
    /// `cos(frequency x_1) exp(-|x|^2 / (2 width^2))`.
    CosinePacket { frequency: T, width: T },
}

impl<T: Real> TestFunction<T> {
    /// The standard normal density on R^n.
    pub fn standard_normal(dim: usize) -> Self {
        let c1 = (T::TAU()).powf(-from_usize::<T>(dim) * c(0.5));
        TestFunction::Gaussian { c1, c2: c(0.5) }
    }

    pub fn validate(&self, grid: &Grid<T>) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            TestFunction::Gaussian { c1, c2 } => {
                positive("c1", *c1)?;
                positive("c2", *c2)
            }
            TestFunction::BoxIndicator { corner, side } => {
                positive("side", *side)?;
                if corner.len() != grid.dim() {
                    return Err(Error::InvalidSpec(format!(
                        "box corner has {} coordinates, grid has dimension {}",
                        corner.len(),
                        grid.dim()
                    )));
                }
                for (a, &x0) in corner.iter().enumerate() {
                    let l = grid.half_extent()[a];
                    if x0 < -l || x0 + *side > l {
                        return Err(Error::InvalidSpec(format!(
                            "box [{x0}, {}) leaves the domain [-{l}, {l}] on axis {a}",
                            x0 + *side
                        )));
                    }
                }
                Ok(())
            }
            TestFunction::SmoothBump { radius } => {
                positive("radius", *radius)?;
                if *radius >= grid.min_half_extent() {
                    return Err(Error::InvalidSpec(format!(
                        "bump radius {radius} must be below the smallest half extent {}",
                        grid.min_half_extent()
                    )));
                }
                Ok(())
            }
            TestFunction::CosinePacket { frequency, width } => {
                positive("frequency", *frequency)?;
                positive("width", *width)
            }
        }
    }

    pub fn eval(&self, x: &[T]) -> T {
        let r2 = x.iter().fold(T::zero(), |s, &v| s + v * v);
        match self {
            TestFunction::Gaussian { c1, c2 } => *c1 * (-*c2 * r2).exp(),
            TestFunction::BoxIndicator { corner, side } => {
                let inside = x
                    .iter()
                    .zip(corner)
                    .all(|(&xi, &ci)| xi >= ci && xi < ci + *side);
                if inside {
                    T::one()
                } else {
                    T::zero()
                }
            }
            TestFunction::SmoothBump { radius } => {
                let u = r2 / (*radius * *radius);
                if u < T::one() {
                    (-T::one() / (T::one() - u)).exp()
                } else {
                    T::zero()
                }
            }
            TestFunction::CosinePacket { frequency, width } => {
                (*frequency * x[0]).cos() * (-r2 / (c::<T>(2.0) * *width * *width)).exp()
            }
        }
    }

    pub fn sample(&self, grid: &Grid<T>) -> Result<GridFunction<T>> {
        self.validate(grid)?;
        GridFunction::from_fn(grid.clone(), |x| Complex::new(self.eval(x), T::zero()))
    }
}

/// `(prod h_i * sum |f_j|^p)^(1/p)`, or `max |f_j|` for `p = inf`.
pub fn lp_norm<T: Real>(f: &GridFunction<T>, p: T) -> Result<T> {
    if p.is_nan() || p < T::one() {
        return Err(Error::domain("lp_norm", format!("p must be >= 1 or inf, got {p}")));
    }
    let m = f.max_abs();
    if p.is_infinite() || m == T::zero() {
        return Ok(m);
    }
    let s = pairwise_sum_by(f.values(), &|v: &Complex<T>| (v.norm() / m).powf(p));
    Ok(m * (s * f.grid().cell_volume()).powf(p.recip()))
}

/// `T_h f (t) = f(t - h)` with multilinear interpolation and zero extension.
pub fn shift<T: Real>(f: &GridFunction<T>, h: &[T]) -> Result<GridFunction<T>> {
    let grid = f.grid();
    let dim = grid.dim();
    if h.len() != dim {
        return Err(Error::GridMismatch(format!(
            "shift vector has {} components, grid has dimension {dim}",
            h.len()
        )));
    }
    // Per axis: integer offset and the weight of the next-lower source node.
    let mut offset = [0_i64; MAX_DIM];
    let mut frac = [T::zero(); MAX_DIM];
    for a in 0..dim {
        if !(h[a].abs() < c::<T>(2.0) * grid.half_extent()[a]) {
            return Err(Error::domain("shift", format!("|h_{a}| must be < 2 L_{a}")));
        }
        let d = h[a] / grid.spacing(a);
        let mut fl = d.floor();
        let mut fr = d - fl;
        let snap = c::<T>(1e-9);
        if fr < snap {
            fr = T::zero();
        } else if fr > T::one() - snap {
            fl += T::one();
            fr = T::zero();
        }
        offset[a] = fl.to_i64().unwrap_or(0);
        frac[a] = fr;
    }
    let shape = grid.shape3();
    let strides = grid.strides();
    let src = f.values();
    let values: Vec<Complex<T>> = (0..grid.len())
        .into_par_iter()
        .map(|flat| {
            let idx = grid.unravel(flat);
            let mut acc = Complex::new(T::zero(), T::zero());
            // Corner k uses node (j - offset - bit_a) on axis a.
            for corner in 0..(1usize << dim) {
                let mut w = T::one();
                let mut pos = 0usize;
                let mut inside = true;
                for a in 0..dim {
                    let bit = (corner >> a) & 1;
                    let wa = if bit == 1 { frac[a] } else { T::one() - frac[a] };
                    if wa == T::zero() {
                        inside = false;
                        break;
                    }
                    let j = idx[a] as i64 - offset[a] - bit as i64;
                    if j < 0 || j >= shape[a] as i64 {
                        inside = false;
                        break;
                    }
                    w *= wa;
                    pos += j as usize * strides[a];
                }
                if inside {
                    acc += src[pos] * w;
                }
            }
            acc
        })
        .collect();
    Ok(GridFunction::from_parts(grid.clone(), values))
}

/// Sampled lower bound for `sup_{|h| <= delta} || T_h f - f ||_p`.
///
/// Tries every axis-aligned shift of length `delta` (both signs) and
/// `directions` random unit directions at lengths `delta/2` and `delta`.
pub fn modulus_of_continuity<T: Real, R: Rng + ?Sized>(
    f: &GridFunction<T>,
    p: T,
    delta: T,
    directions: usize,
    rng: &mut R,
) -> Result<T> {
    let grid = f.grid();
    if !(delta >= T::zero()) || !(delta < grid.min_half_extent()) {
        return Err(Error::domain(
            "modulus_of_continuity",
            format!("delta must lie in [0, {}), got {delta}", grid.min_half_extent()),
        ));
    }
    if directions == 0 {
        return Err(Error::domain("modulus_of_continuity", "directions must be >= 1"));
    }
    if delta == T::zero() {
        return Ok(T::zero());
    }
    let dim = grid.dim();
    let mut shifts: Vec<Vec<T>> = Vec::new();
    for a in 0..dim {
        for sign in [T::one(), -T::one()] {
            let mut h = vec![T::zero(); dim];
            h[a] = sign * delta;
            shifts.push(h);
        }
    }
    for _ in 0..directions {
        let u = random_unit_vector::<T, R>(dim, rng);
        for scale in [c::<T>(0.5), T::one()] {
            shifts.push(u.iter().map(|&x| x * delta * scale).collect());
        }
    }
    let mut best = T::zero();
    for h in &shifts {
        let diff = shift(f, h)?.sub(f)?;
        best = best.max(lp_norm(&diff, p)?);
    }
    Ok(best)
}

/// [`modulus_of_continuity`] over an increasing list of `deltas`, made
/// monotone by a running maximum (a sample at a smaller radius is also a
/// valid lower bound at every larger one).
pub fn modulus_profile<T: Real, R: Rng + ?Sized>(
    f: &GridFunction<T>,
    p: T,
    deltas: &[T],
    directions: usize,
    rng: &mut R,
) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(deltas.len());
    let mut running = T::zero();
    for &d in deltas {
        running = running.max(modulus_of_continuity(f, p, d, directions, rng)?);
        out.push(running);
    }
    Ok(out)
}

fn random_unit_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<T> {
    loop {
        // Box-Muller pairs give isotropic normals.
        let mut v = Vec::with_capacity(dim);
        while v.len() < dim {
            let u1: f64 = rng.random::<f64>();
            let u2: f64 = rng.random::<f64>();
            let rad = (-2.0 * (1.0 - u1).ln()).sqrt();
            let th = std::f64::consts::TAU * u2;
            v.push(rad * th.cos());
            if v.len() < dim {
                v.push(rad * th.sin());
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| T::lit(x / n)).collect();
        }
    }
}

/// `(f * g)(t_j) = prod h_i * sum_s f(t_j - s) g(s)` over grid nodes `s`,
/// with both functions zero outside the box. Cost is quadratic in the
/// number of nodes.
pub fn convolve_direct<T: Real>(f: &GridFunction<T>, g: &GridFunction<T>) -> Result<GridFunction<T>> {
    ensure_same_grid(f.grid(), g.grid())?;
    let grid = f.grid();
    let shape = grid.shape3();
    let centre = [shape[0] / 2, shape[1] / 2, shape[2] / 2];
    let (s0, s1) = (shape[1] * shape[2], shape[2]);
    let fv = f.values();
    let gv = g.values();
    let h = grid.cell_volume();
    // Node t_j - s_k has index j - k + M/2 on each axis.
    let range = |j: usize, axis: usize| {
        let m = shape[axis] as i64;
        let base = j as i64 + centre[axis] as i64;
        let lo = (base - (m - 1)).max(0) as usize;
        let hi = base.min(m - 1) as usize;
        (lo, hi, base as usize)
    };
    let values: Vec<Complex<T>> = (0..grid.len())
        .into_par_iter()
        .map(|flat| {
            let j = [flat / s0, (flat / s1) % shape[1], flat % shape[2]];
            let (lo0, hi0, b0) = range(j[0], 0);
            let (lo1, hi1, b1) = range(j[1], 1);
            let (lo2, hi2, b2) = range(j[2], 2);
            let mut acc = Complex::new(T::zero(), T::zero());
            for k0 in lo0..=hi0 {
                for k1 in lo1..=hi1 {
                    let fbase = (b0 - k0) * s0 + (b1 - k1) * s1;
                    let gbase = k0 * s0 + k1 * s1;
                    for k2 in lo2..=hi2 {
                        acc += fv[fbase + b2 - k2] * gv[gbase + k2];
                    }
                }
            }
            acc * h
        })
        .collect();
    Ok(GridFunction::from_parts(grid.clone(), values))
}

/// On-disk layout of a grid function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunctionFile {
    pub dim: usize,
    pub half_extent: Vec<f64>,
    pub points: Vec<usize>,
    pub values_re: Vec<f64>,
    pub values_im: Vec<f64>,
}

impl<T: Real> GridFunction<T> {
    pub fn to_file(&self) -> GridFunctionFile {
        GridFunctionFile {
            dim: self.grid.dim(),
            half_extent: self.grid.half_extent().iter().map(|l| l.to_f64_lossy()).collect(),
            points: self.grid.points().to_vec(),
            values_re: self.values.iter().map(|v| v.re.to_f64_lossy()).collect(),
            values_im: self.values.iter().map(|v| v.im.to_f64_lossy()).collect(),
        }
    }

    pub fn from_file(file: &GridFunctionFile) -> Result<Self> {
        if file.half_extent.len() != file.dim || file.points.len() != file.dim {
            return Err(Error::Format(format!(
                "dim = {} but half_extent has {} entries and points has {}",
                file.dim,
                file.half_extent.len(),
                file.points.len()
            )));
        }
        let grid = Grid::new(
            file.half_extent.iter().map(|&l| T::lit(l)).collect(),
            file.points.clone(),
        )
        .map_err(|e| Error::Format(e.to_string()))?;
        if file.values_re.len() != grid.len() || file.values_im.len() != grid.len() {
            return Err(Error::Format(format!(
                "expected {} values, got {} real and {} imaginary",
                grid.len(),
                file.values_re.len(),
                file.values_im.len()
            )));
        }
        let values = file
            .values_re
            .iter()
            .zip(&file.values_im)
            .map(|(&re, &im)| Complex::new(T::lit(re), T::lit(im)))
            .collect();
        GridFunction::new(grid, values).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("grid function file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GridFunctionFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_file(&file)
    }
}
