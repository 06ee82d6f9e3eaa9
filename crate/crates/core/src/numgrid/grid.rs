use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Smallest admissible number of samples on any grid.
pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// `x_j = -L + j h`, `j = 0..n`, periodic with period `2L`.
    PeriodicX,
    /// `k_j = j h`, `j = 1..=n`, covering `(0, k_max]`.
    HalfLineK,
}

/// A uniform one-dimensional sample set. Points are computed on demand so the
/// grid is `Copy` and can be shared freely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    kind: GridKind,
    extent: f64,
    n: usize,
}

impl Grid {
    /// Periodic grid on `[-half_width, half_width)`.
    pub fn periodic(half_width: f64, n: usize) -> Result<Self> {
        Self::new(GridKind::PeriodicX, half_width, n)
    }

    /// Half-line grid on `(0, k_max]`, excluding the origin.
    pub fn half_line(k_max: f64, n: usize) -> Result<Self> {
        Self::new(GridKind::HalfLineK, k_max, n)
    }

    fn new(kind: GridKind, extent: f64, n: usize) -> Result<Self> {
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "extent must be positive and finite, got {extent}"
            )));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points, got {n}"
            )));
        }
        Ok(Self { kind, extent, n })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// `L` for periodic grids, `k_max` for half-line grids.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        match self.kind {
            GridKind::PeriodicX => 2.0 * self.extent / self.n as f64,
            GridKind::HalfLineK => self.extent / self.n as f64,
        }
    }

    #[inline]
    pub fn point(&self, j: usize) -> f64 {
        let h = self.spacing();
        match self.kind {
            GridKind::PeriodicX => -self.extent + j as f64 * h,
            GridKind::HalfLineK => (j + 1) as f64 * h,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    pub(crate) fn require(&self, kind: GridKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!(
                "expected a {kind:?} grid, got {:?}",
                self.kind
            )))
        }
    }
}
