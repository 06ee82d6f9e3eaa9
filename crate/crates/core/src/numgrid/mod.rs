//! Grids, discrete operators, quadrature and Fourier-side utilities.

mod band;
mod field;
mod fourier;
mod grid;
mod quadrature;

pub use band::{build_first_derivative, build_schrodinger_l, BandOperator};
pub use field::{ComplexField, Field, RealField, Sample};
pub use fourier::{fourier_quadrature, forward_transform, Branch};
pub use grid::{Grid, GridKind};
pub use quadrature::{antiderivative, inner, norm_l2, trapezoid};
