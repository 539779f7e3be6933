//! Norms of A^{is} for |s| ≤ 5 on a curved domain, with the log-growth slope.

use std::sync::Arc;

use pullback::calculus::{bip_sweep, ContourSpec};
use pullback::geometry::{CatalogGraph, PullbackMap};
use pullback::operators::{assemble_pullback_laplacian, probe_set, BoundaryCondition};
use pullback::spaces::{GridSpec, HalfSpaceGrid, NormSpec};

fn main() -> pullback::Result<()> {
    let grid = Arc::new(HalfSpaceGrid::new(GridSpec { dim: 2, x_max: 8.0, n1: 48, n2: 16, ..GridSpec::default() })?);
    let p = PullbackMap::new(Arc::new(CatalogGraph::bump(2, 0.05, 1.0)?))?;
    let a = assemble_pullback_laplacian(Arc::clone(&grid), &p, BoundaryCondition::Dirichlet)?.0.shifted(1.0)?;
    let s: Vec<f64> = (-10..=10).map(|k| 0.5 * k as f64).collect();
    let sweep = bip_sweep(&a, &s, &ContourSpec::default(), &probe_set(&grid, 8, 1), NormSpec::lebesgue(2.0, 0.5)?)?;
    for (s, n) in &sweep.points {
        println!("s = {s:>5.1}  ‖A^is‖ ≈ {n:.4}");
    }
    println!("slope of log ‖A^is‖ in |s|: {:.4}", sweep.log_slope());
    Ok(())
}
