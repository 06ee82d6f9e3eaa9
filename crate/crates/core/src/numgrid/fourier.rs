use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{GridKind, RealField};
use crate::{Error, Result};

/// Which half of the Fourier line a transform lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Tail samples that must have decayed before a half-line integral is
/// trusted.
const TAIL_SAMPLES: usize = 8;
/// Largest admissible tail, relative to the peak magnitude.
pub(crate) const TAIL_TOLERANCE: f64 = 1e-12;
/// The phasor recurrence is reseeded from an exact exponential this often.
const RESYNC: usize = 128;

/// `Σ_j w_j a_j e^{i s k_j x}` for every target, using a phasor recurrence.
fn oscillatory_sum(k0: f64, h: f64, weights: &[f64], x: f64, s: f64) -> Complex64 {
    let step = Complex64::from_polar(1.0, s * h * x);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut phase = Complex64::from_polar(1.0, s * k0 * x);
    for (j, &w) in weights.iter().enumerate() {
        if j % RESYNC == 0 {
            phase = Complex64::from_polar(1.0, s * (k0 + j as f64 * h) * x);
        }
        acc += phase * w;
        phase *= step;
    }
    acc
}

/// Trapezoid evaluation of `u(x) = (2π)^{-1/2} ∫ û(k) e^{ikx} dk` over
/// `(0, k_max]` for [`Branch::Plus`].
///
/// For [`Branch::Minus`] the integral runs over `(-k_max, 0)` with
/// `û₋(k) := û(-k)`, so the samples are shared with the plus branch. The
/// integrand at `k = 0` is taken as zero, which is exact for the eigenmodes
/// (they vanish linearly there).
pub fn fourier_quadrature(
    uhat: &RealField,
    branch: Branch,
    x_targets: &[f64],
) -> Result<Vec<Complex64>> {
    let grid = uhat.grid();
    grid.require(GridKind::HalfLineK)?;
    let v = uhat.values();
    let peak = v.iter().fold(0.0_f64, |m, &a| m.max(a.abs()));
    let tail = v[v.len() - TAIL_SAMPLES..]
        .iter()
        .fold(0.0_f64, |m, &a| m.max(a.abs()));
    if peak > 0.0 && tail > TAIL_TOLERANCE * peak {
        return Err(Error::Truncation { tail: tail / peak });
    }
    let h = grid.spacing();
    let scale = h / (2.0 * PI).sqrt();
    let mut weights: Vec<f64> = v.iter().map(|&a| a * scale).collect();
    let last = weights.len() - 1;
    weights[last] *= 0.5;
    Ok(x_targets
        .iter()
        .map(|&x| oscillatory_sum(grid.point(0), h, &weights, x, branch.sign()))
        .collect())
}

/// `û(k) = (2π)^{-1/2} h Σ_j u_j e^{-ikx_j}` for a field on a periodic grid,
/// evaluated at arbitrary wavenumbers.
pub fn forward_transform(u: &RealField, k_targets: &[f64]) -> Result<Vec<Complex64>> {
    let grid = u.grid();
    grid.require(GridKind::PeriodicX)?;
    let scale = grid.spacing() / (2.0 * PI).sqrt();
    let weights: Vec<f64> = u.values().iter().map(|&a| a * scale).collect();
    Ok(k_targets
        .iter()
        .map(|&k| oscillatory_sum(grid.point(0), grid.spacing(), &weights, k, -1.0))
        .collect())
}
