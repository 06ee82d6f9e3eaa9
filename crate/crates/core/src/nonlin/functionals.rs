#[allow(unused_imports)]
use num_traits::Float;

use super::{w_log, RegularizedNonlinearity};
use crate::numgrid::{build_first_derivative, RealField};
use crate::Result;

/// Conserved quantities and the `H¹` monitor of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalsRecord {
    pub t: f64,
    /// `½‖v‖²`.
    pub p: f64,
    /// `½∫v_x² - ∫W_ε(v)`, present when a regularization is given.
    pub e_eps: Option<f64>,
    /// `½∫[v_x² - v² log|v|] + ¼∫v²`.
    pub e_log: f64,
    pub h1: f64,
}

/// Trapezoid quadrature of the functionals; `v_x` uses the central
/// difference `D`, and `v² log|v|` is 0 where `v = 0`.
pub fn functionals(v: &RealField, reg: Option<&RegularizedNonlinearity>) -> Result<FunctionalsRecord> {
    let d = build_first_derivative(v.grid())?;
    let h = v.grid().spacing();
    let vx = d.apply(v.values());
    let l2: f64 = h * v.values().iter().map(|a| a * a).sum::<f64>();
    let grad: f64 = h * vx.iter().map(|a| a * a).sum::<f64>();
    let w: f64 = h * v.values().iter().map(|&a| w_log(a)).sum::<f64>();
    let e_eps = reg.map(|r| 0.5 * grad - h * v.values().iter().map(|&a| r.w(a)).sum::<f64>());
    Ok(FunctionalsRecord {
        t: v.time(),
        p: 0.5 * l2,
        e_eps,
        e_log: 0.5 * grad - w,
        h1: (l2 + grad).sqrt(),
    })
}
