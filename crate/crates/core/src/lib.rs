//! Boundary-flattening pullbacks for special Lipschitz-type domains and
//! numerical checks of weighted Laplacian estimates on the half-space.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: boundary graphs, the regularised distance `ρ` and the map `Ψ`;
//! * [`spaces`]: graded half-space grids, weighted norms, traces and Hardy checks;
//! * [`operators`]: Laplacians, the pullback perturbations and resolvent scans;
//! * [`calculus`]: contour functional calculus, powers and the Riesz transform;
//! * [`evolution`]: backward Euler and maximal-regularity ratios;
//! * [`experiment`]: the config-driven runner behind the `pullback` binary.

pub mod calculus;
pub mod error;
pub mod evolution;
pub mod experiment;
pub mod geometry;
pub mod operators;
pub mod quadrature;
pub mod spaces;

pub use error::{Error, Result};
