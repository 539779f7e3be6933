//! Discrete Laplacians, pullback perturbations, resolvents and sector scans.

mod assemble;
mod banded;
mod norm_est;
mod perturbation;
mod probes;
mod resolvent;
mod scan;
mod sparse;

pub use assemble::{
    assemble_laplacian, assemble_perturbation, assemble_pullback_laplacian,
    assemble_pullback_laplacian_with, perturbation_coefficients, BoundaryCondition,
    DiscreteOperator, OperatorLabel, PerturbationCoefficients,
};
pub use banded::BandedLu;
pub use norm_est::{estimate_norm, LinearMap, NormEstimate, NormMethod, NormOptions};
pub use perturbation::{
    check_boundary_condition, elliptic_regularity_ratio, perturbation_ratio, DIRICHLET_TRACE_TOL,
    NEUMANN_TRACE_TOL,
};
pub use probes::{probe_set, smooth_random, smooth_trials, white_noise};
pub use resolvent::{resolvent_solve, Resolvent, RESIDUAL_TOL};
pub use scan::{log_spaced, sectoriality_scan, ScaledResolvent, ScanFlag, ScanRow, ScanTable};
pub use sparse::{CsrMatrix, TripletBuilder};
pub(crate) use assemble::normal_gradient;
