//! Shared numerical kernels: adaptive quadrature, embedded Runge-Kutta
//! integration, finite differences, and the Gamma function.

pub mod diff;
pub mod gamma;
pub mod ode;
pub mod quad;

pub use diff::{det, fd_step, gradient_fd, invert, jacobian_fd};
pub use gamma::gamma_fn;
pub use ode::{solve_ode, OdeTrajectory};
pub use quad::{integrate_1d, integrate_1d_with_budget, integrate_2d, QuadResult};
