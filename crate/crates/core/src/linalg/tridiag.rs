use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

const MAX_BISECTION: usize = 256;
const MAX_QL_SWEEPS: usize = 60;
const MAX_REFINEMENT: usize = 8;

/// Real symmetric tridiagonal matrix with diagonal `a` and off-diagonal `b`
/// (`b[i]` couples rows `i` and `i + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len() + 1, diag.len());
        Self { a: diag, b: off }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.a
    }

    pub fn off(&self) -> &[f64] {
        &self.b
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.a[i] * x[i];
                if i > 0 {
                    y += self.b[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.b[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Bounds enclosing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.b[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.b[i].abs() } else { 0.0 };
            lo = lo.min(self.a[i] - r);
            hi = hi.max(self.a[i] + r);
        }
        (lo, hi)
    }

    fn pivot_floor(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn sturm_count(&self, x: f64) -> usize {
        let floor = self.pivot_floor();
        let mut count = 0;
        let mut d = self.a[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                d = self.a[i] - x - self.b[i - 1] * self.b[i - 1] / d;
            }
            if d == 0.0 {
                d = -floor;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (zero based), by bisection on
    /// the Sturm count.
    pub fn eigenvalue(&self, index: usize) -> Result<f64> {
        if index >= self.dim() {
            return Err(Error::InvalidArgument {
                name: "index",
                reason: alloc::format!("{index} exceeds dimension {}", self.dim()),
            });
        }
        let (mut lo, mut hi) = self.gershgorin();
        let floor = self.pivot_floor();
        for _ in 0..MAX_BISECTION {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + floor || mid == lo || mid == hi {
                return Ok(mid);
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NonConvergence {
            iterations: MAX_BISECTION,
        })
    }

    /// Eigenvector for the eigenvalue estimate `lambda` from the twisted
    /// factorization `T - λ = N_r Δ_r N_rᵀ`. The twist index is chosen where
    /// `|γ_r|` is smallest, and the vector is built by products of
    /// multipliers only, so exponentially small tails keep their relative
    /// accuracy. Returned with unit Euclidean norm.
    pub fn twisted_eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.dim();
        if n == 1 {
            return vec![1.0];
        }
        let floor = self.pivot_floor();
        let guard = |d: f64| if d == 0.0 { floor } else { d };
        let mut dp = vec![0.0; n];
        dp[0] = guard(self.a[0] - lambda);
        for i in 0..n - 1 {
            dp[i + 1] = guard(self.a[i + 1] - lambda - self.b[i] * self.b[i] / dp[i]);
        }
        let mut dm = vec![0.0; n];
        dm[n - 1] = guard(self.a[n - 1] - lambda);
        for i in (0..n - 1).rev() {
            dm[i] = guard(self.a[i] - lambda - self.b[i] * self.b[i] / dm[i + 1]);
        }
        let r = (0..n)
            .min_by(|&i, &j| {
                let gi = dp[i] + dm[i] - (self.a[i] - lambda);
                let gj = dp[j] + dm[j] - (self.a[j] - lambda);
                gi.abs().total_cmp(&gj.abs())
            })
            .unwrap_or(0);
        let mut z = vec![0.0; n];
        z[r] = 1.0;
        for i in (0..r).rev() {
            z[i] = -self.b[i] / dp[i] * z[i + 1];
        }
        for i in r..n - 1 {
            z[i + 1] = -self.b[i] / dm[i + 1] * z[i];
        }
        normalize(&mut z);
        z
    }

    /// Eigenpair with the twisted vector, refined by inverse iteration
    /// until the residual `‖(T - λ)z‖` reaches `tol · ‖T‖`.
    pub fn eigenpair(&self, index: usize, tol: f64) -> Result<(f64, Vec<f64>)> {
        let mut lambda = self.eigenvalue(index)?;
        let mut z = self.twisted_eigenvector(lambda);
        let (lo, hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs());
        for iteration in 0..=MAX_REFINEMENT {
            let tz = self.apply(&z);
            let rq: f64 = tz.iter().zip(&z).map(|(a, b)| a * b).sum();
            let res = tz
                .iter()
                .zip(&z)
                .map(|(a, b)| (a - rq * b) * (a - rq * b))
                .sum::<f64>()
                .sqrt();
            if res <= tol * scale {
                return Ok((lambda, z));
            }
            if iteration == MAX_REFINEMENT {
                break;
            }
            lambda = rq;
            z = self.shifted_solve(lambda, &z);
            normalize(&mut z);
        }
        Err(Error::NonConvergence {
            iterations: MAX_REFINEMENT,
        })
    }

    /// Solves `(T - σ) y = rhs` by Gaussian elimination without pivoting;
    /// zero pivots are nudged to the Sturm floor, as inverse iteration
    /// only needs the direction of `y`.
    fn shifted_solve(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let floor = self.pivot_floor();
        let mut d = vec![0.0; n];
        let mut y = rhs.to_vec();
        d[0] = self.a[0] - sigma;
        for i in 1..n {
            if d[i - 1] == 0.0 {
                d[i - 1] = floor;
            }
            let l = self.b[i - 1] / d[i - 1];
            d[i] = self.a[i] - sigma - l * self.b[i - 1];
            y[i] -= l * y[i - 1];
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = floor;
        }
        y[n - 1] /= d[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = (y[i] - self.b[i] * y[i + 1]) / d[i];
        }
        y
    }

    /// All eigenvalues, ascending, by the implicit QL algorithm with
    /// Wilkinson-type shifts. Independent of the Sturm machinery and used
    /// as a cross-check.
    pub fn eigenvalues_ql(&self) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut d = self.a.clone();
        let mut e = self.b.clone();
        e.push(0.0);
        for l in 0..n {
            let mut iter = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                if iter > MAX_QL_SWEEPS {
                    return Err(Error::NonConvergence { iterations: iter - 1 });
                }
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
                let mut underflow = false;
                let mut i = m;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if underflow {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
        d.sort_by(f64::total_cmp);
        Ok(d)
    }
}

fn normalize(z: &mut [f64]) {
    let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    z.iter_mut().for_each(|v| *v /= norm);
}
