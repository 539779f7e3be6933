//! Half-space grids, grid functions, weighted norms, traces and Hardy checks.

mod diff;
mod function;
mod grid;
mod hardy;
mod norms;
mod pushforward;
mod trace;

pub use diff::{partial, NormalStencils};
pub(crate) use diff::partial_with;
pub use function::{write_grid_csv, GridFunction};
pub use grid::{GridSpec, HalfSpaceGrid};
pub use hardy::{hardy_check, hardy_constant, HardyCase, HardyReport};
pub use norms::{
    embedding_check, lp_norm, sobolev_norm, weight_vector, NormSpec, SobolevNorm, MAX_ORDER,
};
pub use pushforward::{interpolate, pull_back, pushforward};
pub use trace::{normal_trace_eval, trace_eval};
