use alloc::vec;
use alloc::vec::Vec;

use crate::numgrid::BandOperator;
use crate::{Error, Result};

/// LU factorization with partial pivoting of a (non-cyclic) banded matrix,
/// in the layout of LAPACK's `gbtrf`: `kl` sub-diagonals, `ku`
/// super-diagonals and `kl` extra super-diagonals for pivoting fill.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row `i` holds columns `i - kl ..= i + ku + kl` of `U`.
    rows: Vec<f64>,
    /// `kl` multipliers per column.
    lower: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    fn width(kl: usize, ku: usize) -> usize {
        2 * kl + ku + 1
    }

    /// Factors the non-wrapping part of `op`; cyclic corner entries are
    /// ignored here.
    pub fn factor(op: &BandOperator) -> Result<Self> {
        let n = op.dim();
        let kl = op.offsets().iter().filter(|&&o| o < 0).map(|o| o.unsigned_abs()).max().unwrap_or(0);
        let ku = op.offsets().iter().filter(|&&o| o > 0).map(|&o| o as usize).max().unwrap_or(0);
        let w = Self::width(kl, ku);
        let mut rows = vec![0.0; n * w];
        for (d, &o) in op.offsets().iter().enumerate() {
            let band = op.band(d);
            for (i, &v) in band.iter().enumerate() {
                let j = i as isize + o;
                if (0..n as isize).contains(&j) {
                    rows[i * w + (o + kl as isize) as usize] += v;
                }
            }
        }
        let mut lu = Self {
            n,
            kl,
            ku,
            rows,
            lower: vec![0.0; n * kl],
            pivots: vec![0; n],
        };
        lu.eliminate()?;
        Ok(lu)
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        i * Self::width(self.kl, self.ku) + (j + self.kl - i)
    }

    fn eliminate(&mut self) -> Result<()> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let mut p = k;
            let mut best = self.rows[self.at(k, k)].abs();
            for i in k + 1..=last_row {
                let v = self.rows[self.at(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular(k));
            }
            self.pivots[k] = p;
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (self.at(k, j), self.at(p, j));
                    self.rows.swap(a, b);
                }
            }
            let pivot = self.rows[self.at(k, k)];
            for i in k + 1..=last_row {
                let l = self.rows[self.at(i, k)] / pivot;
                self.lower[k * kl + (i - k - 1)] = l;
                if l != 0.0 {
                    for j in k + 1..=last_col {
                        let u = self.rows[self.at(k, j)];
                        let idx = self.at(i, j);
                        self.rows[idx] -= l * u;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        assert_eq!(b.len(), n);
        for k in 0..n {
            b.swap(k, self.pivots[k]);
            let bk = b[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                b[i] -= self.lower[k * kl + (i - k - 1)] * bk;
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..=(i + kl + ku).min(n - 1) {
                s -= self.rows[self.at(i, j)] * b[j];
            }
            b[i] = s / self.rows[self.at(i, i)];
        }
    }
}

/// Solver for cyclic banded systems `A x = b`.
///
/// `A` is split into its banded part `B` and the wrap-around corners
/// `C = U Vᵀ`, where `U` selects the rows carrying corner entries. The
/// Woodbury identity `A⁻¹ = B⁻¹ - Z (I + Vᵀ Z)⁻¹ Vᵀ B⁻¹` with `Z = B⁻¹ U`
/// then costs one banded solve plus a rank-`r` update per right-hand side.
#[derive(Debug, Clone)]
pub struct CyclicBandSolver {
    lu: BandedLu,
    /// Rows of `A` that carry corner entries.
    corner_rows: Vec<usize>,
    /// Sparse rows of `Vᵀ`: `(column, value)` per corner row.
    corner_entries: Vec<Vec<(usize, f64)>>,
    /// `B⁻¹ U`, one column of length `n` per corner row.
    z: Vec<Vec<f64>>,
    /// LU of the `r × r` capacitance matrix `I + Vᵀ Z` (row-major) and its pivots.
    cap: Vec<f64>,
    cap_pivots: Vec<usize>,
}

impl CyclicBandSolver {
    pub fn factor(op: &BandOperator) -> Result<Self> {
        let n = op.dim();
        let lu = BandedLu::factor(op)?;
        let mut corner_rows: Vec<usize> = Vec::new();
        let mut corner_entries: Vec<Vec<(usize, f64)>> = Vec::new();
        if op.is_cyclic() {
            for (d, &o) in op.offsets().iter().enumerate() {
                for (i, &v) in op.band(d).iter().enumerate() {
                    let j = i as isize + o;
                    if (0..n as isize).contains(&j) || v == 0.0 {
                        continue;
                    }
                    let col = j.rem_euclid(n as isize) as usize;
                    let r = match corner_rows.iter().position(|&x| x == i) {
                        Some(r) => r,
                        None => {
                            corner_rows.push(i);
                            corner_entries.push(Vec::new());
                            corner_rows.len() - 1
                        }
                    };
                    corner_entries[r].push((col, v));
                }
            }
        }
        let r = corner_rows.len();
        let z: Vec<Vec<f64>> = corner_rows
            .iter()
            .map(|&i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                lu.solve_in_place(&mut e);
                e
            })
            .collect();
        let mut cap = vec![0.0; r * r];
        for a in 0..r {
            for b in 0..r {
                let vz: f64 = corner_entries[a].iter().map(|&(c, v)| v * z[b][c]).sum();
                cap[a * r + b] = vz + if a == b { 1.0 } else { 0.0 };
            }
        }
        let cap_pivots = dense_lu(&mut cap, r)?;
        Ok(Self {
            lu,
            corner_rows,
            corner_entries,
            z,
            cap,
            cap_pivots,
        })
    }

    pub fn rank(&self) -> usize {
        self.corner_rows.len()
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        self.lu.solve_in_place(b);
        let r = self.rank();
        if r == 0 {
            return;
        }
        let mut w: Vec<f64> = self
            .corner_entries
            .iter()
            .map(|row| row.iter().map(|&(c, v)| v * b[c]).sum())
            .collect();
        dense_solve(&self.cap, &self.cap_pivots, r, &mut w);
        for (zc, &wc) in self.z.iter().zip(&w) {
            for (bi, &zi) in b.iter_mut().zip(zc) {
                *bi -= zi * wc;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

fn dense_lu(a: &mut [f64], r: usize) -> Result<Vec<usize>> {
    let mut piv = vec![0; r];
    for k in 0..r {
        let p = (k..r)
            .max_by(|&i, &j| a[i * r + k].abs().total_cmp(&a[j * r + k].abs()))
            .unwrap_or(k);
        if a[p * r + k] == 0.0 {
            return Err(Error::Singular(k));
        }
        piv[k] = p;
        if p != k {
            for j in 0..r {
                a.swap(k * r + j, p * r + j);
            }
        }
        for i in k + 1..r {
            let l = a[i * r + k] / a[k * r + k];
            a[i * r + k] = l;
            for j in k + 1..r {
                a[i * r + j] -= l * a[k * r + j];
            }
        }
    }
    Ok(piv)
}

fn dense_solve(a: &[f64], piv: &[usize], r: usize, b: &mut [f64]) {
    // Rows were swapped in full during factorization, so all interchanges
    // precede the unit-lower solve.
    for k in 0..r {
        b.swap(k, piv[k]);
    }
    for k in 0..r {
        for i in k + 1..r {
            b[i] -= a[i * r + k] * b[k];
        }
    }
    for i in (0..r).rev() {
        let s: f64 = (i + 1..r).map(|j| a[i * r + j] * b[j]).sum();
        b[i] = (b[i] - s) / a[i * r + i];
    }
}
