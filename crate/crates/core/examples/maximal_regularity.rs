//! Backward Euler for u' − Δu = f and the maximal-regularity ratio on a
//! catalog of forcings, for two temporal weights.

use std::sync::Arc;

use pullback::evolution::{forcing_catalog, heat_solve, max_reg_ratio, TimeGrid};
use pullback::operators::{assemble_laplacian, BoundaryCondition};
use pullback::spaces::{GridSpec, HalfSpaceGrid, NormSpec};

fn main() -> pullback::Result<()> {
    let grid = Arc::new(HalfSpaceGrid::new(GridSpec { n1: 96, ..GridSpec::default() })?);
    let a = assemble_laplacian(Arc::clone(&grid), BoundaryCondition::Dirichlet);
    let spec = NormSpec::lebesgue(2.0, 0.0)?;
    for weight in [0.0, 0.5] {
        let tg = TimeGrid::graded(2.0, 64, 1.02, 2.0, weight)?;
        println!("temporal weight t^{weight}");
        for f in forcing_catalog(&tg, &grid) {
            let r = max_reg_ratio(&a, &f.samples, &tg, spec)?;
            println!("  {:<12} ratio {r:.4}", f.label);
        }
    }
    let tg = TimeGrid::uniform(1.0, 32, 2.0, 0.0)?;
    let f = &forcing_catalog(&tg, &grid)[0];
    let tr = heat_solve(&a, &f.samples, &tg)?;
    let peak = tr.states.last().unwrap().iter().map(|z| z.norm()).fold(0.0, f64::max);
    println!("{} at t = {}: max |u| = {peak:.4}", f.label, tr.times.last().unwrap());
    Ok(())
}
