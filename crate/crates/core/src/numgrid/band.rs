use alloc::vec;
use alloc::vec::Vec;

use super::{Grid, GridKind};
use crate::Result;

/// A real banded matrix stored by diagonals, optionally with cyclic
/// wrap-around.
///
/// `bands[d][i]` is the entry at row `i`, column `i + offsets[d]` (reduced
/// modulo `n` when cyclic). Entries whose column falls outside `0..n` in the
/// non-cyclic case are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct BandOperator {
    n: usize,
    offsets: Vec<isize>,
    bands: Vec<Vec<f64>>,
    cyclic: bool,
}

impl BandOperator {
    /// Offsets must be distinct and satisfy `|offset| < n/2` so cyclic
    /// diagonals never alias.
    pub fn new(n: usize, offsets: Vec<isize>, bands: Vec<Vec<f64>>, cyclic: bool) -> Self {
        assert_eq!(offsets.len(), bands.len(), "one band per offset");
        assert!(bands.iter().all(|b| b.len() == n), "bands must have length n");
        assert!(
            offsets.iter().all(|o| 2 * o.unsigned_abs() < n),
            "offsets must stay below n/2"
        );
        for (i, o) in offsets.iter().enumerate() {
            assert!(!offsets[..i].contains(o), "duplicate offset {o}");
        }
        Self {
            n,
            offsets,
            bands,
            cyclic,
        }
    }

    pub fn identity(n: usize, cyclic: bool) -> Self {
        Self::new(n, vec![0], vec![vec![1.0; n]], cyclic)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn offsets(&self) -> &[isize] {
        &self.offsets
    }

    pub fn band(&self, d: usize) -> &[f64] {
        &self.bands[d]
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    /// Largest `|offset|`.
    pub fn half_bandwidth(&self) -> usize {
        self.offsets.iter().map(|o| o.unsigned_abs()).max().unwrap_or(0)
    }

    /// Column of the entry in row `i` on diagonal `offset`, if it exists.
    #[inline]
    pub fn column(&self, i: usize, offset: isize) -> Option<usize> {
        let j = i as isize + offset;
        let n = self.n as isize;
        if (0..n).contains(&j) {
            Some(j as usize)
        } else if self.cyclic {
            Some(j.rem_euclid(n) as usize)
        } else {
            None
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.offsets
            .iter()
            .zip(&self.bands)
            .filter(|(&o, _)| self.column(i, o) == Some(j))
            .map(|(_, b)| b[i])
            .sum()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for (&o, band) in self.offsets.iter().zip(&self.bands) {
            for (i, yi) in y.iter_mut().enumerate() {
                if let Some(j) = self.column(i, o) {
                    *yi += band[i] * x[j];
                }
            }
        }
        y
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        for (&o, band) in self.offsets.iter().zip(&self.bands) {
            for (i, &v) in band.iter().enumerate() {
                if let Some(j) = self.column(i, o) {
                    a[i * n + j] += v;
                }
            }
        }
        a
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut offsets = Vec::with_capacity(self.offsets.len());
        let mut bands = Vec::with_capacity(self.bands.len());
        for (&o, band) in self.offsets.iter().zip(&self.bands) {
            let mut t = vec![0.0; n];
            // A[i, i+o] becomes Aᵀ[i+o, i].
            for (i, &v) in band.iter().enumerate() {
                if let Some(j) = self.column(i, o) {
                    t[j] = v;
                }
            }
            offsets.push(-o);
            bands.push(t);
        }
        Self::new(n, offsets, bands, self.cyclic)
    }

    /// `self · rhs`, keeping the result banded.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let cyclic = self.cyclic || rhs.cyclic;
        let mut offsets: Vec<isize> = Vec::new();
        let mut bands: Vec<Vec<f64>> = Vec::new();
        for (&o1, b1) in self.offsets.iter().zip(&self.bands) {
            for (&o2, b2) in rhs.offsets.iter().zip(&rhs.bands) {
                let o = o1 + o2;
                let d = match offsets.iter().position(|&x| x == o) {
                    Some(d) => d,
                    None => {
                        offsets.push(o);
                        bands.push(vec![0.0; n]);
                        offsets.len() - 1
                    }
                };
                for i in 0..n {
                    let Some(k) = self.column(i, o1) else { continue };
                    if rhs.column(k, o2).is_some() {
                        bands[d][i] += b1[i] * b2[k];
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..offsets.len()).collect();
        order.sort_by_key(|&d| offsets[d]);
        Self::new(
            n,
            order.iter().map(|&d| offsets[d]).collect(),
            order.iter().map(|&d| bands[d].clone()).collect(),
            cyclic,
        )
    }

    /// `alpha · self + beta · I`.
    pub fn scale_shift(&self, alpha: f64, beta: f64) -> Self {
        let mut out = self.clone();
        for b in &mut out.bands {
            b.iter_mut().for_each(|v| *v *= alpha);
        }
        match out.offsets.iter().position(|&o| o == 0) {
            Some(d) => out.bands[d].iter_mut().for_each(|v| *v += beta),
            None => {
                out.offsets.push(0);
                out.bands.push(vec![beta; self.n]);
            }
        }
        out
    }
}

/// Periodic central difference `(u_{j+1} - u_{j-1}) / 2h`.
pub fn build_first_derivative(grid: &Grid) -> Result<BandOperator> {
    grid.require(GridKind::PeriodicX)?;
    let n = grid.len();
    let c = 0.5 / grid.spacing();
    Ok(BandOperator::new(
        n,
        vec![-1, 1],
        vec![vec![-c; n], vec![c; n]],
        true,
    ))
}

/// Periodic discretization of `L = -∂² + ¼(x² - 6)`. The potential is
/// evaluated pointwise, so the wrap-around at `±L` is only harmless for
/// fields that have decayed there.
pub fn build_schrodinger_l(grid: &Grid) -> Result<BandOperator> {
    grid.require(GridKind::PeriodicX)?;
    let n = grid.len();
    let h2 = grid.spacing() * grid.spacing();
    let diag = (0..n)
        .map(|j| {
            let x = grid.point(j);
            2.0 / h2 + 0.25 * (x * x - 6.0)
        })
        .collect();
    Ok(BandOperator::new(
        n,
        vec![-1, 0, 1],
        vec![vec![-1.0 / h2; n], diag, vec![-1.0 / h2; n]],
        true,
    ))
}
