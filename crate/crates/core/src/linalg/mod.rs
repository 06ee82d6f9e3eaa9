//! Linear-algebra kernels: cyclic banded solves, symmetric tridiagonal
//! eigenproblems and a radix-2 FFT.

mod banded;
mod fft;
mod tridiag;

pub use banded::{BandedLu, CyclicBandSolver};
pub use fft::Fft;
pub use tridiag::SymTridiag;
