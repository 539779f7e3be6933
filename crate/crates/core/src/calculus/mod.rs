//! Holomorphic functional calculus by contour quadrature, fractional and
//! imaginary powers, and the Riesz transform.

mod contour;
mod fractional;
mod functions;
mod hinfty;
mod imaginary;
mod riesz;

pub use contour::{apply_function, apply_function_checked, apply_functions, ContourSpec, CONTOUR_CHECK_TOL};
pub use fractional::{
    fractional_power_apply, fractional_power_inverse_apply, FractionalOptions, FractionalPowers,
};
pub use functions::{
    mollified_imaginary_power, rational_family, sampled_sup, shifted_inverse, standard_family,
    ScalarFn, SectorFunction, DEFAULT_MOLLIFICATION, FAMILY_OMEGA,
};
pub use hinfty::{hinfty_bound_estimate, hinfty_bound_estimates, HinftyReport, HinftyRow};
pub use imaginary::{bip_sweep, imaginary_power_norm, BipSweep, BIP_EPSILON, BIP_MAX_S};
pub use riesz::{riesz_transform_norm, riesz_transform_ratio, RieszMap};
