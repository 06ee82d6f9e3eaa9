use alloc::vec::Vec;

use num_complex::Complex64;

use super::Grid;
use crate::{Error, Result};

/// Scalar types a [`Field`] can hold.
pub trait Sample: Copy + core::fmt::Debug + PartialEq {
    fn is_finite_sample(&self) -> bool;
}

impl Sample for f64 {
    fn is_finite_sample(&self) -> bool {
        self.is_finite()
    }
}

impl Sample for Complex64 {
    fn is_finite_sample(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Time-stamped samples on a grid. Length and finiteness are checked at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T: Sample> {
    grid: Grid,
    values: Vec<T>,
    time: f64,
}

pub type RealField = Field<f64>;
pub type ComplexField = Field<Complex64>;

impl<T: Sample> Field<T> {
    pub fn new(grid: Grid, values: Vec<T>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite_sample()) {
            return Err(Error::NonFinite(j));
        }
        Ok(Self { grid, values, time })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

impl RealField {
    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Grid, time: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|j| f(grid.point(j))).collect();
        Self::new(grid, values, time)
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: alloc::vec![0.0; grid.len()],
            time: 0.0,
        }
    }
}
