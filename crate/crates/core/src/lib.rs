//! Numerics for the logarithmic Korteweg-de Vries equation
//! `v_t + v_xxx + (v log|v|)_x = 0`.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`numgrid`]: grids, banded difference operators, quadrature and the
//!   direct inverse Fourier quadrature.
//! * [`linalg`]: cyclic banded solves, symmetric tridiagonal eigensolvers and
//!   a radix-2 FFT.
//! * [`spectrum`]: the half-line eigenproblems of the linearization at the
//!   Gaussian wave `v_G = e^{1/2 - x^2/4}`.
//! * [`linevolve`]: the Cayley (trapezoidal) scheme for `u_t = ∂ₓ L u`.
//! * [`modal`]: symplectic projection onto the generalized eigenbasis and
//!   spectral reconstruction of the linear flow.
//! * [`nonlin`]: the ε-regularized nonlinear flow by Strang splitting.
#![no_std]
#![forbid(unsafe_code)]
// The `num_traits::Float` imports are allowed to go unused: newer
// toolchains (and test builds, which link std) have inherent float methods.

extern crate alloc;

mod error;
pub mod linalg;
pub mod linevolve;
pub mod modal;
pub mod nonlin;
pub mod numgrid;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// `2√π e^{1/2}`, the integral of the Gaussian wave over the line.
pub const GAUSSIAN_MASS: f64 = 5.844_564_730_644_556;

/// The Gaussian solitary wave `e^{1/2 - x^2/4}`.
#[inline]
pub fn gaussian_wave(x: f64) -> f64 {
    num_traits::Float::exp(0.5 - 0.25 * x * x)
}

/// Derivative of [`gaussian_wave`], which spans the kernel of `L`.
#[inline]
pub fn gaussian_wave_dx(x: f64) -> f64 {
    -0.5 * x * gaussian_wave(x)
}
