//! Backward Euler for `∂ₜu = Au + f`, `u(0) = 0`, and discrete maximal
//! regularity ratios in temporally weighted norms.

mod heat;
mod maxreg;
mod time;

pub use heat::{heat_solve, sample_forcing, Trajectory};
pub use maxreg::{
    forcing_catalog, max_reg_ratio, write_ratio_csv, CatalogForcing, MaxRegRow, TemporalProfile,
};
pub use time::TimeGrid;
