//! Symplectic projection onto the generalized eigenbasis of `∂ₓL` and
//! spectral reconstruction of the linear flow
//!
//! `u(x,t) = b [v_G - t v_G′] + a₀ v_G′ + Σₙ a₊ₙ u₊ₙ e^{iω₊ₙt} + Σₙ a₋ₙ u₋ₙ e^{iω₋ₙt}`,
//!
//! with `ω₋ₙ = -ω₊ₙ`. The series starts at `n = 0`: the `E = 0` modes
//! `û = k e^{-k²}` on each half-line are part of the basis.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numgrid::{antiderivative, forward_transform, inner, norm_l2, trapezoid, Branch, GridKind, RealField};
use crate::spectrum::{gram_matrix, reflect, EigenMode};
use crate::{gaussian_wave, gaussian_wave_dx, Error, Result};

/// Largest admissible `max |G - I|` of a mode set.
pub const GRAM_TOLERANCE: f64 = 1e-4;
/// `|b|` above this multiple of `‖u₀‖` leaves the constrained space.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-8;
/// Imaginary residue tolerated in a real reconstruction, relative to the
/// real part.
pub const REALITY_TOLERANCE: f64 = 1e-8;

/// Plus and minus eigenmodes with matching indices and samples, checked
/// for orthonormality on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    plus: Vec<EigenMode>,
    minus: Vec<EigenMode>,
}

impl ModeBasis {
    /// Builds the basis from plus-branch modes, reflecting them for the
    /// minus branch.
    pub fn from_plus(plus: Vec<EigenMode>) -> Result<Self> {
        if plus.is_empty() || plus.iter().any(|m| m.branch != Branch::Plus) {
            return Err(Error::InvalidArgument {
                name: "modes",
                reason: "need a non-empty list of plus-branch modes".into(),
            });
        }
        let g = gram_matrix(&plus);
        let defect = g
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (v - if i == j { 1.0 } else { 0.0 }).abs()))
            .fold(0.0_f64, f64::max);
        if defect > GRAM_TOLERANCE {
            return Err(Error::Normalization { defect });
        }
        let minus = plus.iter().map(reflect).collect();
        Ok(Self { plus, minus })
    }

    pub fn plus(&self) -> &[EigenMode] {
        &self.plus
    }

    pub fn minus(&self) -> &[EigenMode] {
        &self.minus
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    /// Plus-branch frequencies `ω₊ₙ = E_n / 4`.
    pub fn omegas(&self) -> Vec<f64> {
        self.plus.iter().map(|m| m.omega).collect()
    }

    /// Computes the physical samples of every mode on `x` (kept for
    /// reuse by [`reconstruct`]).
    pub fn attach_physical(&mut self, x: &[f64]) -> Result<()> {
        for m in &mut self.plus {
            crate::spectrum::mode_to_physical(m, x)?;
        }
        self.minus = self.plus.iter().map(reflect).collect();
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModalCoefficients {
    pub b: f64,
    pub a0: f64,
    /// `a₊ₙ` for `n = 0 .. n_modes`.
    pub a_plus: Vec<Complex64>,
    /// `a₋ₙ` for `n = 0 .. n_modes`.
    pub a_minus: Vec<Complex64>,
    pub n_modes: usize,
    /// `‖u₀‖₂` of the projected data, the scale for the `b` constraint.
    pub data_norm: f64,
}

impl ModalCoefficients {
    pub fn zeros(n_modes: usize) -> Self {
        Self {
            b: 0.0,
            a0: 0.0,
            a_plus: vec![Complex64::new(0.0, 0.0); n_modes],
            a_minus: vec![Complex64::new(0.0, 0.0); n_modes],
            n_modes,
            data_norm: 0.0,
        }
    }

    /// Coefficients of the same solution with the time origin moved to
    /// `t`: `a±ₙ e^{iω±ₙt}`, and the secular term folded into `a₀`.
    pub fn advanced(&self, basis: &ModeBasis, t: f64) -> Self {
        let mut c = self.clone();
        c.a0 -= self.b * t;
        for (n, m) in basis.plus().iter().enumerate().take(self.n_modes) {
            c.a_plus[n] *= Complex64::from_polar(1.0, m.omega * t);
            c.a_minus[n] *= Complex64::from_polar(1.0, -m.omega * t);
        }
        c
    }

    /// `max_n |a₋ₙ - conj(a₊ₙ)|`, zero for coefficients of real data.
    pub fn conjugacy_defect(&self) -> f64 {
        self.a_plus
            .iter()
            .zip(&self.a_minus)
            .map(|(p, m)| (m - p.conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// The lower layer of [`project`]: `a₊ₙ = ∫₀ ûₙ(k) r̂(k)/k dk` and
/// `a₋ₙ = ∫₀ ûₙ(s) r̂(-s)/s ds`, given the transform `r̂` of the residual
/// at `+k_j` and `-k_j`. The `k = 0` sample is excluded; the integrand is
/// finite there because `ûₙ(k) = O(k)`.
pub fn project_spectrum(
    b: f64,
    a0: f64,
    rhat_plus: &[Complex64],
    rhat_minus: &[Complex64],
    basis: &ModeBasis,
) -> Result<ModalCoefficients> {
    let grid = *basis.plus()[0].uhat.grid();
    let n = grid.len();
    for r in [rhat_plus, rhat_minus] {
        if r.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: r.len() });
        }
    }
    let h = grid.spacing();
    let weight = |j: usize| if j + 1 == n { 0.5 * h } else { h } / grid.point(j);
    let pair = |u: &[f64], r: &[Complex64]| -> Complex64 {
        u.iter()
            .zip(r)
            .enumerate()
            .map(|(j, (&u, &r))| r * (u * weight(j)))
            .sum()
    };
    let a_plus = basis.plus().iter().map(|m| pair(m.uhat.values(), rhat_plus)).collect();
    let a_minus = basis.minus().iter().map(|m| pair(m.uhat.values(), rhat_minus)).collect();
    Ok(ModalCoefficients {
        b,
        a0,
        a_plus,
        a_minus,
        n_modes: basis.len(),
        data_norm: 0.0,
    })
}

/// Projects real data on a periodic grid onto the basis. `b` and `a₀` come
/// from x-space quadrature; the mode coefficients are k-space pairings of
/// the residual `u₀ - b v_G - a₀ v_G′`.
pub fn project(u0: &RealField, basis: &ModeBasis) -> Result<ModalCoefficients> {
    let grid = *u0.grid();
    grid.require(GridKind::PeriodicX)?;
    let vg = RealField::from_fn(grid, 0.0, gaussian_wave)?;
    let norm2 = inner(&vg, &vg);
    let mass = trapezoid(&vg);
    let b = inner(&vg, u0) / norm2;
    let ivg = antiderivative(&vg)?;
    let a0 = (0.5 * b * mass * mass - inner(&ivg, u0)) / norm2;
    let residual: Vec<f64> = u0
        .values()
        .iter()
        .enumerate()
        .map(|(j, &u)| {
            let x = grid.point(j);
            u - b * gaussian_wave(x) - a0 * gaussian_wave_dx(x)
        })
        .collect();
    let residual = RealField::new(grid, residual, u0.time())?;
    let k = basis.plus()[0].uhat.grid().points();
    let rhat_plus = forward_transform(&residual, &k)?;
    // Real data: r̂(-k) = conj(r̂(k)).
    let rhat_minus: Vec<Complex64> = rhat_plus.iter().map(|z| z.conj()).collect();
    let mut c = project_spectrum(b, a0, &rhat_plus, &rhat_minus, basis)?;
    c.data_norm = norm_l2(u0);
    Ok(c)
}

/// Evaluates the truncated series at time `t` on `x_targets`. Mode samples
/// attached with [`ModeBasis::attach_physical`] on the same targets are
/// reused; otherwise they are computed on the fly.
pub fn reconstruct(c: &ModalCoefficients, basis: &ModeBasis, t: f64, x_targets: &[f64]) -> Result<Vec<f64>> {
    if c.n_modes > basis.len() {
        return Err(Error::InvalidArgument {
            name: "modes",
            reason: format!("coefficients use {} modes, basis has {}", c.n_modes, basis.len()),
        });
    }
    let mut acc: Vec<Complex64> = x_targets
        .iter()
        .map(|&x| {
            Complex64::new(
                c.b * (gaussian_wave(x) - t * gaussian_wave_dx(x)) + c.a0 * gaussian_wave_dx(x),
                0.0,
            )
        })
        .collect();
    for (branch, coeffs) in [(basis.plus(), &c.a_plus), (basis.minus(), &c.a_minus)] {
        for (mode, &a) in branch.iter().zip(coeffs.iter()).take(c.n_modes) {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let computed;
            let u = match &mode.physical {
                Some(p) if p.x == x_targets => &p.u,
                _ => {
                    computed = crate::numgrid::fourier_quadrature(&mode.uhat, mode.branch, x_targets)?;
                    &computed
                }
            };
            let w = a * Complex64::from_polar(1.0, mode.omega * t);
            for (s, &z) in acc.iter_mut().zip(u) {
                *s += w * z;
            }
        }
    }
    let re_scale = acc.iter().fold(0.0_f64, |m, z| m.max(z.re.abs()));
    let residue = acc.iter().fold(0.0_f64, |m, z| m.max(z.im.abs()));
    if residue > REALITY_TOLERANCE * re_scale.max(1.0) {
        return Err(Error::RealityViolation { residue });
    }
    Ok(acc.iter().map(|z| z.re).collect())
}

/// `½ Σₙ |ωₙ| (|a₊ₙ|² + |a₋ₙ|²)`, the quadratic energy of data in the
/// constrained space `⟨v_G, u⟩ = 0`.
pub fn ec_modal(c: &ModalCoefficients, omegas: &[f64]) -> Result<f64> {
    if c.b.abs() > CONSTRAINT_TOLERANCE * c.data_norm.max(1.0) {
        return Err(Error::ConstraintViolation { b: c.b });
    }
    Ok(0.5
        * omegas
            .iter()
            .zip(c.a_plus.iter().zip(&c.a_minus))
            .map(|(w, (p, m))| w.abs() * (p.norm_sqr() + m.norm_sqr()))
            .sum::<f64>())
}
