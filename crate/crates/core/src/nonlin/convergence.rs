use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{evolve_nonlinear, RegularizedNonlinearity, Smoothness};
use crate::numgrid::RealField;
use crate::{Error, Result};

/// Outcome of one ε run, reduced to what the report needs.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsRun {
    pub eps: f64,
    pub final_state: RealField,
    pub p_drift: f64,
    pub e_drift: f64,
}

impl EpsRun {
    pub fn execute(v0: &RealField, eps: f64, m: Smoothness, dt: f64, t_final: f64, record_every: usize) -> Result<Self> {
        let reg = RegularizedNonlinearity::new(eps, m)?;
        let tr = evolve_nonlinear(v0, &reg, dt, t_final, record_every)?;
        Ok(Self {
            eps,
            final_state: tr.snapshots.last().cloned().expect("initial state is always recorded"),
            p_drift: tr.p_drift,
            e_drift: tr.e_drift,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsReport {
    pub eps: Vec<f64>,
    /// Each run or the error it raised.
    pub runs: Vec<Result<EpsRun>>,
    /// `‖v^{ε_i}(t_f) - v^{ε_j}(t_f)‖₂`, `None` when either run failed.
    pub distances: Vec<Vec<Option<f64>>>,
}

impl EpsReport {
    /// Assembles a report from runs made elsewhere (possibly concurrently).
    pub fn from_runs(eps: Vec<f64>, runs: Vec<Result<EpsRun>>) -> Self {
        let n = runs.len();
        let mut distances = alloc::vec![alloc::vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if let (Ok(a), Ok(b)) = (&runs[i], &runs[j]) {
                    let h = a.final_state.grid().spacing();
                    let d: f64 = a
                        .final_state
                        .values()
                        .iter()
                        .zip(b.final_state.values())
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum();
                    distances[i][j] = Some((h * d).sqrt());
                }
            }
        }
        Self { eps, runs, distances }
    }

    /// Distances between consecutive ε, `‖v^{ε_{j+1}} - v^{ε_j}‖`.
    pub fn successive(&self) -> Vec<Option<f64>> {
        (1..self.eps.len()).map(|j| self.distances[j][j - 1]).collect()
    }
}

pub fn validate_eps_list(eps_list: &[f64]) -> Result<()> {
    if eps_list.is_empty() || eps_list.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidArgument {
            name: "eps_list",
            reason: format!("need positive finite values, got {eps_list:?}"),
        });
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument {
            name: "eps_list",
            reason: format!("must be strictly decreasing, got {eps_list:?}"),
        });
    }
    Ok(())
}

/// Runs the regularized flow for each ε in turn. Solver failures are kept
/// per run rather than aborting the sweep.
pub fn eps_convergence(
    v0: &RealField,
    eps_list: &[f64],
    m: Smoothness,
    dt: f64,
    t_final: f64,
    record_every: usize,
) -> Result<EpsReport> {
    validate_eps_list(eps_list)?;
    let runs = eps_list
        .iter()
        .map(|&eps| EpsRun::execute(v0, eps, m, dt, t_final, record_every))
        .collect();
    Ok(EpsReport::from_runs(eps_list.to_vec(), runs))
}
