//! The ε-regularized flow `v_t + v_xxx + ∂ₓ f_ε(v) = 0`, its conserved
//! functionals, the Gaussian soliton family and the `ε → 0` experiment.

mod convergence;
mod evolve;
mod functionals;
mod regularize;
mod soliton;

pub use convergence::{eps_convergence, validate_eps_list, EpsReport, EpsRun};
pub use evolve::{evolve_nonlinear, nonlinear_rhs, LinearPropagator, NonlinearTrajectory, Warning};
pub use functionals::{functionals, FunctionalsRecord};
pub use regularize::{f_log, w_log, RegularizedNonlinearity, Smoothness};
pub use soliton::{peak_position, soliton};
