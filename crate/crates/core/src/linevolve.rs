//! The linearized flow `u_t = ∂ₓ L u` by the trapezoidal (Cayley) scheme
//! `(I - Δt/2 S) u_{m+1} = (I + Δt/2 S) u_m`, `S = D L_D`.
//!
//! Because `Dᵀ = -D` and `L_Dᵀ = L_D` exactly, the step map `R` satisfies
//! `Rᵀ L_D R = L_D`, so the discrete energy `½ h uᵀ L_D u` is conserved to
//! round-off.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::CyclicBandSolver;
use crate::numgrid::{build_first_derivative, build_schrodinger_l, BandOperator, Grid, GridKind, RealField};
use crate::{gaussian_wave, gaussian_wave_dx, Error, Result};

/// Largest time step accepted by [`evolve_linear`].
pub const MAX_DT: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialKind {
    /// `x (x² - (5+6α)/((1+α)(1+2α))) e^{-(1+2α)x²/4}`.
    Odd,
    /// `(x⁴ - 3(3+4α)/((1+α)(1+2α)) x² + 6/((1+α)(1+2α))) e^{-(1+2α)x²/4}`.
    Even,
    /// The Gaussian wave itself.
    Gaussian,
    /// Its derivative, the kernel of `L`.
    Kernel,
}

/// Samples the chosen initial profile. Both polynomial families are
/// orthogonal to `v_G` and to `∂ₓ⁻¹v_G` for every `α ≥ 0`.
pub fn make_initial_data(kind: InitialKind, alpha: f64, grid: &Grid) -> Result<RealField> {
    grid.require(GridKind::PeriodicX)?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "alpha",
            reason: format!("must be finite and non-negative, got {alpha}"),
        });
    }
    let q = (1.0 + alpha) * (1.0 + 2.0 * alpha);
    let width = 0.25 * (1.0 + 2.0 * alpha);
    match kind {
        InitialKind::Odd => RealField::from_fn(*grid, 0.0, |x| {
            x * (x * x - (5.0 + 6.0 * alpha) / q) * (-width * x * x).exp()
        }),
        InitialKind::Even => RealField::from_fn(*grid, 0.0, |x| {
            let x2 = x * x;
            (x2 * x2 - 3.0 * (3.0 + 4.0 * alpha) / q * x2 + 6.0 / q) * (-width * x2).exp()
        }),
        InitialKind::Gaussian => RealField::from_fn(*grid, 0.0, gaussian_wave),
        InitialKind::Kernel => RealField::from_fn(*grid, 0.0, gaussian_wave_dx),
    }
}

/// `½ h uᵀ L_D u`.
pub fn discrete_energy(l_d: &BandOperator, u: &[f64], h: f64) -> f64 {
    let lu = l_d.apply(u);
    0.5 * h * lu.iter().zip(u).map(|(a, b)| a * b).sum::<f64>()
}

/// One factored Cayley step for a fixed grid and time step. The time step
/// may be negative, which runs the scheme backwards.
#[derive(Debug, Clone)]
pub struct LinearStepper {
    grid: Grid,
    dt: f64,
    l_d: BandOperator,
    explicit: BandOperator,
    implicit: BandOperator,
    solver: CyclicBandSolver,
}

impl LinearStepper {
    pub fn new(grid: &Grid, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::InvalidArgument {
                name: "dt",
                reason: format!("must be finite and nonzero, got {dt}"),
            });
        }
        let d = build_first_derivative(grid)?;
        let l_d = build_schrodinger_l(grid)?;
        let s = d.compose(&l_d);
        let implicit = s.scale_shift(-0.5 * dt, 1.0);
        let explicit = s.scale_shift(0.5 * dt, 1.0);
        let solver = CyclicBandSolver::factor(&implicit)?;
        Ok(Self {
            grid: *grid,
            dt,
            l_d,
            explicit,
            implicit,
            solver,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn schrodinger(&self) -> &BandOperator {
        &self.l_d
    }

    pub fn step(&self, u: &mut [f64]) {
        let rhs = self.explicit.apply(u);
        u.copy_from_slice(&rhs);
        self.solver.solve_in_place(u);
    }

    /// `‖(I - Δt/2 S) u_next - (I + Δt/2 S) u‖₂ / ‖u_next‖₂`.
    pub fn solve_residual(&self, u: &[f64], u_next: &[f64]) -> f64 {
        let lhs = self.implicit.apply(u_next);
        let rhs = self.explicit.apply(u);
        let r: f64 = lhs.iter().zip(&rhs).map(|(a, b)| (a - b) * (a - b)).sum();
        let n: f64 = u_next.iter().map(|a| a * a).sum();
        (r / n).sqrt()
    }

    pub fn energy(&self, u: &[f64]) -> f64 {
        discrete_energy(&self.l_d, u, self.grid.spacing())
    }
}

/// Per-record diagnostics. The moments are `None` for a zero field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub l2: f64,
    pub ec: f64,
    pub xbar: Option<f64>,
    pub sigma: Option<f64>,
}

/// `‖u‖₂`, `E_c = ½⟨L_D u, u⟩`, the centre of mass `x̄` of `u²` and the
/// standard deviation `σ` about it.
pub fn diagnostics(u: &RealField, l_d: &BandOperator) -> DiagnosticsRecord {
    let g = u.grid();
    let h = g.spacing();
    let v = u.values();
    let mass: f64 = h * v.iter().map(|a| a * a).sum::<f64>();
    let ec = discrete_energy(l_d, v, h);
    let (xbar, sigma) = if mass > 0.0 {
        let m1: f64 = h * v.iter().enumerate().map(|(j, a)| g.point(j) * a * a).sum::<f64>();
        let xbar = m1 / mass;
        let m2: f64 = h * v
            .iter()
            .enumerate()
            .map(|(j, a)| (g.point(j) - xbar).powi(2) * a * a)
            .sum::<f64>();
        (Some(xbar), Some((m2 / mass).max(0.0).sqrt()))
    } else {
        (None, None)
    };
    DiagnosticsRecord {
        t: u.time(),
        l2: mass.sqrt(),
        ec,
        xbar,
        sigma,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearTrajectory {
    /// Snapshots at `t = 0`, every `record_every` steps, and the final time.
    pub snapshots: Vec<RealField>,
    pub diagnostics: Vec<DiagnosticsRecord>,
    /// Largest `|ΔE_c| / (1 + |E_c|)` over single steps.
    pub max_step_energy_drift: f64,
}

/// Number of steps of size `dt` that make up `t_final`.
pub fn step_count(dt: f64, t_final: f64) -> Result<usize> {
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(Error::InvalidArgument {
            name: "t_final",
            reason: format!("must be finite and non-negative, got {t_final}"),
        });
    }
    let ratio = t_final / dt;
    let steps = ratio.round();
    if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::InvalidArgument {
            name: "t_final",
            reason: format!("{t_final} is not a multiple of dt = {dt}"),
        });
    }
    Ok(steps as usize)
}

/// Integrates from `u0` to `t_final`, factoring the implicit operator once.
pub fn evolve_linear(u0: &RealField, dt: f64, t_final: f64, record_every: usize) -> Result<LinearTrajectory> {
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(Error::InvalidArgument {
            name: "dt",
            reason: format!("must lie in (0, {MAX_DT}], got {dt}"),
        });
    }
    if record_every == 0 {
        return Err(Error::InvalidArgument {
            name: "record_every",
            reason: "must be at least 1".into(),
        });
    }
    let steps = step_count(dt, t_final)?;
    let grid = *u0.grid();
    let stepper = LinearStepper::new(&grid, dt)?;
    let mut u = u0.values().to_vec();
    let t0 = u0.time();
    let mut snapshots = Vec::new();
    let mut records = Vec::new();
    let mut record = |u: &[f64], t: f64| -> Result<()> {
        let f = RealField::new(grid, u.to_vec(), t)?;
        records.push(diagnostics(&f, stepper.schrodinger()));
        snapshots.push(f);
        Ok(())
    };
    record(&u, t0)?;
    let mut energy = stepper.energy(&u);
    let mut drift: f64 = 0.0;
    for m in 1..=steps {
        stepper.step(&mut u);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step: m });
        }
        let next = stepper.energy(&u);
        drift = drift.max((next - energy).abs() / (1.0 + energy.abs()));
        energy = next;
        if m % record_every == 0 || m == steps {
            record(&u, t0 + m as f64 * dt)?;
        }
    }
    Ok(LinearTrajectory {
        snapshots,
        diagnostics: records,
        max_step_energy_drift: drift,
    })
}
