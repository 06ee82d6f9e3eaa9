//! Half-line eigenproblems of the linearization at the Gaussian wave.
//!
//! On the Fourier side, `∂ₓL` becomes `k^{1/2}(-d²/dk² + 4k² - 6)k^{1/2}` on
//! each half-line. The plus problem is discretized in the symmetric form
//! `K^{1/2} T K^{1/2}` on `k_j = j h`, with Dirichlet conditions at `k = 0`
//! (selecting the Frobenius solution that vanishes linearly) and at `k_max`.
//! The minus problem is its mirror image and is obtained by reflection.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::SymTridiag;
use crate::numgrid::{fourier_quadrature, Branch, Grid, RealField};
use crate::{Error, Result};

/// Smallest truncation at which the confining potential `4k² - 6` is
/// trusted to have killed every requested mode.
pub const MIN_K_MAX: f64 = 8.0;
pub const MAX_MODES: usize = 64;
/// Eigenvector residual target, relative to `‖T‖`.
const RESIDUAL_TOL: f64 = 1e-13;
/// Relative tail size at `k_max` above which the truncation is rejected.
const TAIL_TOL: f64 = 1e-12;
/// Exponents above this are reported as faster than any power.
pub const SUPER_ALGEBRAIC: f64 = 10.0;

/// One eigenpair of the linearized operator on one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenMode {
    pub branch: Branch,
    pub index: usize,
    pub eigenvalue: f64,
    /// `E / 4`, signed like the eigenvalue.
    pub omega: f64,
    /// Symmetric-form eigenfunction, `∫ v̂² dk = 1`.
    pub vhat: RealField,
    /// `û = k^{1/2} v̂`, with `û(k)/k > 0` as `k → 0`.
    pub uhat: RealField,
    /// Physical-side samples once [`mode_to_physical`] has run.
    pub physical: Option<PhysicalSamples>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalSamples {
    pub x: Vec<f64>,
    pub u: Vec<Complex64>,
}

/// The symmetric tridiagonal matrix `K^{1/2} T K^{1/2}` on the interior
/// points `k_1 .. k_{N-1}` of a half-line grid with `N = n_points`.
pub fn half_line_matrix(grid: &Grid) -> SymTridiag {
    let h = grid.spacing();
    let n = grid.len() - 1;
    let k: Vec<f64> = (0..n).map(|j| grid.point(j)).collect();
    let diag = k
        .iter()
        .map(|&k| k * (2.0 / (h * h) + 4.0 * k * k - 6.0))
        .collect();
    let off = k.windows(2).map(|w| -(w[0] * w[1]).sqrt() / (h * h)).collect();
    SymTridiag::new(diag, off)
}

/// The `n_modes` eigenpairs of smallest `|E|` on the requested branch,
/// ordered by `|E|`.
pub fn solve_half_line(
    k_max: f64,
    n_points: usize,
    n_modes: usize,
    branch: Branch,
) -> Result<Vec<EigenMode>> {
    if !(k_max >= MIN_K_MAX) {
        return Err(Error::InvalidArgument {
            name: "k_max",
            reason: format!("must be at least {MIN_K_MAX}, got {k_max}"),
        });
    }
    if n_modes == 0 || n_modes > MAX_MODES {
        return Err(Error::InvalidArgument {
            name: "n_modes",
            reason: format!("must lie in 1..={MAX_MODES}, got {n_modes}"),
        });
    }
    let grid = Grid::half_line(k_max, n_points)?;
    if n_modes > n_points / 2 {
        return Err(Error::InvalidArgument {
            name: "n_modes",
            reason: format!("{n_modes} modes need more than {n_points} grid points"),
        });
    }
    let t = half_line_matrix(&grid);
    let h = grid.spacing();
    let mut modes = Vec::with_capacity(n_modes);
    for index in 0..n_modes {
        let (e, z) = t.eigenpair(index, RESIDUAL_TOL)?;
        let sign = if z[0] < 0.0 { -1.0 } else { 1.0 };
        let scale = sign / h.sqrt();
        let mut vhat: Vec<f64> = z.iter().map(|v| v * scale).collect();
        vhat.push(0.0);
        let peak = vhat.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tail = vhat[vhat.len() - 9..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if tail > TAIL_TOL * peak {
            return Err(Error::Truncation { tail: tail / peak });
        }
        let uhat: Vec<f64> = vhat
            .iter()
            .enumerate()
            .map(|(j, v)| grid.point(j).sqrt() * v)
            .collect();
        let eigenvalue = branch.sign() * e;
        modes.push(EigenMode {
            branch,
            index,
            eigenvalue,
            omega: 0.25 * eigenvalue,
            vhat: RealField::new(grid, vhat, 0.0)?,
            uhat: RealField::new(grid, uhat, 0.0)?,
            physical: None,
        });
    }
    Ok(modes)
}

/// The mirror mode `û₋(k) := û₊(-k)` with `E → -E`.
pub fn reflect(mode: &EigenMode) -> EigenMode {
    let branch = match mode.branch {
        Branch::Plus => Branch::Minus,
        Branch::Minus => Branch::Plus,
    };
    EigenMode {
        branch,
        eigenvalue: -mode.eigenvalue,
        omega: -mode.omega,
        physical: mode.physical.as_ref().map(|p| PhysicalSamples {
            x: p.x.clone(),
            u: p.u.iter().map(|z| z.conj()).collect(),
        }),
        ..mode.clone()
    }
}

/// The near-origin series `û₁(k) = k - ½Ek² + (E²/12 - 1)k³`, truncated to
/// `n_terms ∈ {2, 3}` terms.
pub fn frobenius_u1(e: f64, k: f64, n_terms: usize) -> Result<f64> {
    if !(2..=3).contains(&n_terms) {
        return Err(Error::UnsupportedOrder(n_terms));
    }
    if !(k.abs() <= 0.5) {
        return Err(Error::InvalidArgument {
            name: "k",
            reason: format!("series is a near-origin oracle, |k| <= 0.5, got {k}"),
        });
    }
    let mut s = k - 0.5 * e * k * k;
    if n_terms == 3 {
        s += (e * e / 12.0 - 1.0) * k * k * k;
    }
    Ok(s)
}

/// Inverse Fourier transform of the mode onto `x_targets`, stored in
/// `mode.physical`.
pub fn mode_to_physical<'a>(mode: &'a mut EigenMode, x_targets: &[f64]) -> Result<&'a [Complex64]> {
    let u = fourier_quadrature(&mode.uhat, mode.branch, x_targets)?;
    mode.physical = Some(PhysicalSamples {
        x: x_targets.to_vec(),
        u,
    });
    Ok(&mode.physical.as_ref().expect("just stored").u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Real,
    Imag,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// `p` in `|part(x)| ~ |x|^{-p}`.
    pub exponent: f64,
    pub super_algebraic: bool,
}

/// Least-squares slope of `log|part|` against `log|x|` over the window.
pub fn fit_decay_exponent(
    x: &[f64],
    samples: &[Complex64],
    window: (f64, f64),
    part: Part,
) -> Result<DecayFit> {
    if x.len() != samples.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: samples.len(),
        });
    }
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument {
            name: "window",
            reason: format!("need 0 < x_lo < x_hi, got [{lo}, {hi}]"),
        });
    }
    let (xmin, xmax) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if lo < xmin || hi > xmax {
        return Err(Error::InvalidArgument {
            name: "window",
            reason: format!("[{lo}, {hi}] leaves the sampled range [{xmin}, {xmax}]"),
        });
    }
    let pick = |z: &Complex64| match part {
        Part::Real => z.re,
        Part::Imag => z.im,
    };
    let selected: Vec<(f64, f64)> = x
        .iter()
        .zip(samples)
        .filter(|(&xi, _)| xi >= lo && xi <= hi)
        .map(|(&xi, z)| (xi, pick(z)))
        .collect();
    if selected.len() < 20 {
        return Err(Error::DegenerateFit(format!(
            "{} samples in window, need at least 20",
            selected.len()
        )));
    }
    let peak = selected.iter().fold(0.0_f64, |m, (_, v)| m.max(v.abs()));
    if peak <= 1e-10 {
        return Err(Error::DegenerateFit(format!(
            "selected part peaks at {peak:e}, below the 1e-10 noise floor"
        )));
    }
    let pts: Vec<(f64, f64)> = selected
        .iter()
        .filter(|(_, v)| *v != 0.0)
        .map(|&(xi, v)| (xi.abs().ln(), v.abs().ln()))
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (u, v)| (a + u, b + v));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (u, v)| {
        (a + (u - mx) * (v - my), b + (u - mx) * (u - mx))
    });
    let exponent = -sxy / sxx;
    Ok(DecayFit {
        exponent,
        super_algebraic: exponent > SUPER_ALGEBRAIC,
    })
}

/// Number of strict sign changes, ignoring exact zeros.
pub fn sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0;
    let mut count = 0;
    for &v in values {
        if v != 0.0 {
            if last * v < 0.0 {
                count += 1;
            }
            last = v;
        }
    }
    count
}

/// `G_{nm} = ∫ v̂_n v̂_m dk` by the trapezoid rule (the `k = 0` and
/// `k = k_max` samples vanish).
pub fn gram_matrix(modes: &[EigenMode]) -> Vec<Vec<f64>> {
    let mut g = vec![vec![0.0; modes.len()]; modes.len()];
    for (i, a) in modes.iter().enumerate() {
        for (j, b) in modes.iter().enumerate().skip(i) {
            let v = crate::numgrid::inner(&a.vhat, &b.vhat);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    g
}
