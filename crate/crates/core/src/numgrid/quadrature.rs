use alloc::vec::Vec;
use core::ops::{Add, Mul};

#[allow(unused_imports)]
use num_traits::Float;

use super::{Field, GridKind, RealField, Sample};
use crate::Result;

/// Trapezoid rule over all samples of a field.
///
/// On a periodic grid the rule reduces to `h Σ u_j`. On the half-line grid
/// the value at the origin is taken as zero and `k_max` gets weight ½.
pub fn trapezoid<T>(field: &Field<T>) -> T
where
    T: Sample + Add<Output = T> + Mul<f64, Output = T> + Default,
{
    let h = field.grid().spacing();
    let v = field.values();
    let sum = v.iter().fold(T::default(), |acc, &x| acc + x);
    match field.grid().kind() {
        GridKind::PeriodicX => sum * h,
        GridKind::HalfLineK => (sum + v[v.len() - 1] * -0.5) * h,
    }
}

/// `<u, w>` with the trapezoid weights of the shared grid.
pub fn inner(u: &RealField, w: &RealField) -> f64 {
    let h = u.grid().spacing();
    let v = u.values();
    let s: f64 = v.iter().zip(w.values()).map(|(a, b)| a * b).sum();
    match u.grid().kind() {
        GridKind::PeriodicX => h * s,
        GridKind::HalfLineK => h * (s - 0.5 * v[v.len() - 1] * w.values()[v.len() - 1]),
    }
}

pub fn norm_l2(u: &RealField) -> f64 {
    inner(u, u).sqrt()
}

/// Cumulative trapezoid integral from the left grid edge, which stands in
/// for `-∞`. No mean is subtracted.
pub fn antiderivative<T>(u: &Field<T>) -> Result<Field<T>>
where
    T: Sample + Add<Output = T> + Mul<f64, Output = T> + Default,
{
    u.grid().require(GridKind::PeriodicX)?;
    let h = u.grid().spacing();
    let v = u.values();
    let mut out = Vec::with_capacity(v.len());
    let mut acc = T::default();
    out.push(acc);
    for w in v.windows(2) {
        acc = acc + (w[0] + w[1]) * (0.5 * h);
        out.push(acc);
    }
    Field::new(*u.grid(), out, u.time())
}
