//! Boundary graphs, mollifiers and the flattening map `Ψ`.

mod checks;
mod graph;
mod mollifier;
mod pullback;
mod seminorm;

pub use checks::{
    distance_ratios, distance_to_boundary, h1_derivative_at_image, sample_domain_points,
    verify_blowup_bounds, verify_distance_equivalence, BlowupLine, BlowupReport, DEFAULT_LATTICE,
};
pub use graph::{BoundaryGraph, CatalogGraph, SMOOTH};
pub use mollifier::{bump_jet, MollifierSpec, DEFAULT_ORDER, HALF_WIDTH};
pub use pullback::{FixedPointReport, PullbackMap, PullbackOptions, RhoDerivatives};
pub use seminorm::{multi_indices, seminorm, seminorm_parts, SeminormEstimate};
