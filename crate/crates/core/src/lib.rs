//! Numerical toolkit for Bochner-Riesz means on sampled functions over R^n.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: Gamma and Bessel J of real nonnegative order.
//! - [`field`]: uniform grids, sampled functions, Lp norms, shifts, moduli of
//!   continuity and direct quadrature convolution.
//! - [`spectral`]: lattice Fourier transform and radial multipliers,
//!   including the spectral Bochner-Riesz operator.
//! - [`kernel`]: the Bessel-form convolution kernel, its Lq norms and the
//!   direct convolution form of the operator.
//! - [`gls`]: grand Lebesgue norms, the W coefficient, the transferred
//!   generating function, sharp Young constants and the Gaussian lower bound.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the scalar to `f64`, which is what the accuracy targets refer to.

// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod gls;
pub mod kernel;
pub mod quad;
pub mod scalar;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

pub type Grid64 = field::Grid<f64>;
pub type GridFunction64 = field::GridFunction<f64>;
pub type TestFunction64 = field::TestFunction<f64>;
pub type KernelSpec64 = kernel::KernelSpec<f64>;
pub type Symbol64 = spectral::Symbol<f64>;
pub type Spectrum64 = spectral::Spectrum<f64>;
pub type GeneratingFunction64 = gls::GeneratingFunction<f64>;
pub type BoundParams64 = gls::BoundParams<f64>;

pub type Grid32 = field::Grid<f32>;
pub type GridFunction32 = field::GridFunction<f32>;
pub type KernelSpec32 = kernel::KernelSpec<f32>;
