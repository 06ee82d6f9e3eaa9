use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;

use super::Warning;
use crate::numgrid::{GridKind, Grid, RealField};
use crate::{gaussian_wave, Result};

/// `e^c v_G(x - a)`, the soliton of speed `c` at `t = 0`.
///
/// A [`Warning::NearBoundary`] is returned alongside the field when the
/// wave would travel beyond `L/2` within `t_horizon`.
pub fn soliton(c: f64, a: f64, grid: &Grid, t_horizon: f64) -> Result<(RealField, Option<Warning>)> {
    grid.require(GridKind::PeriodicX)?;
    if !(c.is_finite() && a.is_finite()) {
        return Err(crate::Error::InvalidArgument {
            name: "c",
            reason: format!("speed and shift must be finite, got c = {c}, a = {a}"),
        });
    }
    let amp = c.exp();
    let field = RealField::from_fn(*grid, 0.0, |x| amp * gaussian_wave(x - a))?;
    let reach = a.abs() + c.abs() * t_horizon.abs();
    let limit = 0.5 * grid.extent();
    let warning = (reach >= limit).then_some(Warning::NearBoundary { reach, limit });
    Ok((field, warning))
}

/// Location of the maximum, refined by a parabola through the largest
/// sample and its neighbours.
pub fn peak_position(v: &RealField) -> f64 {
    let s = v.values();
    let n = s.len();
    let j = (0..n).max_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap_or(0);
    let (l, r) = (s[(j + n - 1) % n], s[(j + 1) % n]);
    let denom = l - 2.0 * s[j] + r;
    let shift = if denom != 0.0 { 0.5 * (l - r) / denom } else { 0.0 };
    v.grid().point(j) + shift * v.grid().spacing()
}
