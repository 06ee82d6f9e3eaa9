use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Order of contact of the matching polynomial with `v log|v|` at `|v| = ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Smoothness {
    /// `p_ε = (log ε - ½)v + v³/(2ε²)`, matching value and slope.
    C1,
    /// `p_ε = (log ε - ¾)v + v³/ε² - v⁵/(4ε⁴)`, matching two derivatives.
    C2,
}

impl Smoothness {
    pub fn from_order(m: u8) -> Result<Self> {
        match m {
            1 => Ok(Self::C1),
            2 => Ok(Self::C2),
            _ => Err(Error::InvalidArgument {
                name: "m",
                reason: format!("smoothness order must be 1 or 2, got {m}"),
            }),
        }
    }

    pub fn order(self) -> u8 {
        match self {
            Self::C1 => 1,
            Self::C2 => 2,
        }
    }
}

/// `v log|v|`, continued by 0 at the origin.
#[inline]
pub fn f_log(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * v.abs().ln()
    }
}

/// `W(v) = ½v² log|v| - ¼v²`, the potential of [`f_log`].
#[inline]
pub fn w_log(v: f64) -> f64 {
    0.5 * v * f_log(v) - 0.25 * v * v
}

/// `f_ε`: `v log|v|` outside `[-ε, ε]`, an odd polynomial inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedNonlinearity {
    eps: f64,
    m: Smoothness,
    log_eps: f64,
}

impl RegularizedNonlinearity {
    pub fn new(eps: f64, m: Smoothness) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument {
                name: "eps",
                reason: format!("must be positive and finite, got {eps}"),
            });
        }
        Ok(Self {
            eps,
            m,
            log_eps: eps.ln(),
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn smoothness(&self) -> Smoothness {
        self.m
    }

    /// `C_m` in `W_ε = W + C_m ε²` on the outer branch. Integrating the
    /// matching polynomial from 0 to ε and comparing with `W(ε)` gives
    /// `1/8` for `m = 1` and `1/12` for `m = 2`.
    pub fn c_m(&self) -> f64 {
        match self.m {
            Smoothness::C1 => 1.0 / 8.0,
            Smoothness::C2 => 1.0 / 12.0,
        }
    }

    #[inline]
    fn inner(&self, v: f64) -> bool {
        v.abs() < self.eps
    }

    /// The matching polynomial itself, valid for any `v`.
    pub fn polynomial(&self, v: f64) -> f64 {
        let r = v * v / (self.eps * self.eps);
        match self.m {
            Smoothness::C1 => v * (self.log_eps - 0.5 + 0.5 * r),
            Smoothness::C2 => v * (self.log_eps - 0.75 + r - 0.25 * r * r),
        }
    }

    #[inline]
    pub fn f(&self, v: f64) -> f64 {
        if self.inner(v) {
            self.polynomial(v)
        } else {
            f_log(v)
        }
    }

    #[inline]
    pub fn df(&self, v: f64) -> f64 {
        if self.inner(v) {
            let r = v * v / (self.eps * self.eps);
            match self.m {
                Smoothness::C1 => self.log_eps - 0.5 + 1.5 * r,
                Smoothness::C2 => self.log_eps - 0.75 + 3.0 * r - 1.25 * r * r,
            }
        } else {
            v.abs().ln() + 1.0
        }
    }

    /// `W_ε(v) = ∫₀^v f_ε`.
    #[inline]
    pub fn w(&self, v: f64) -> f64 {
        if self.inner(v) {
            self.w_inner(v)
        } else {
            w_log(v) + self.c_m() * self.eps * self.eps
        }
    }

    /// `W_ε - C_m ε²`: equals `W` exactly on the outer branch, so flows that
    /// never enter `|v| < ε` are bitwise independent of ε.
    #[inline]
    pub(crate) fn w_shifted(&self, v: f64) -> f64 {
        if self.inner(v) {
            self.w_inner(v) - self.c_m() * self.eps * self.eps
        } else {
            w_log(v)
        }
    }

    fn w_inner(&self, v: f64) -> f64 {
        let v2 = v * v;
        let r = v2 / (self.eps * self.eps);
        match self.m {
            Smoothness::C1 => v2 * (0.5 * (self.log_eps - 0.5) + 0.125 * r),
            Smoothness::C2 => v2 * (0.5 * (self.log_eps - 0.75) + 0.25 * r - r * r / 24.0),
        }
    }
}
