//! Numerical p-modules of curve families and separating sets in
//! condensers.
//!
//! The crate computes extremal densities and module values through three
//! independent routes and cross-checks them against each other:
//!
//! * closed forms for the classical condensers (rectangles, annuli,
//!   cylinders, spherical rings, spiral and twist images, and the
//!   Heisenberg-group spherical ring),
//! * adaptive quadrature of the defining integrals,
//! * a discrete constraint-generation solver on planar grids
//!   ([`oracle`]) that knows nothing about the formulas.
//!
//! Organization: [`fuglede`] holds the density/curve primitives shared by
//! everything; [`numerics`] the quadrature, ODE, and special-function
//! kernels; [`rodin`] the condenser machinery in R^n; [`planar`] the
//! two-dimensional dilatation toolbox; [`carnot`] the polarizable-group
//! (Heisenberg) machinery; [`oracle`] the discrete solver.

pub mod carnot;
pub mod error;
pub mod fuglede;
pub mod numerics;
pub mod oracle;
pub mod planar;
pub mod rodin;

pub use error::{Error, Result};
pub use fuglede::{
    check_admissible, check_extremality, curve_integral, energy, AdmissibilityReport, CurveFamily,
    DensityField, ExtremalityReport, FieldKind, Method, ModuleEstimate, Perturbation, Polyline,
    Region,
};
pub use numerics::{gamma_fn, integrate_1d, integrate_2d, solve_ode, OdeTrajectory, QuadResult};
