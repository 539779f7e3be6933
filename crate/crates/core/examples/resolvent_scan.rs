//! Scaled resolvent norms ‖λR(λ)‖ of μ − Δ^Ψ along rays of the sector.

use std::f64::consts::PI;
use std::sync::Arc;

use pullback::geometry::{CatalogGraph, PullbackMap};
use pullback::operators::{
    assemble_pullback_laplacian, log_spaced, sectoriality_scan, BoundaryCondition, NormOptions,
};
use pullback::spaces::{GridSpec, HalfSpaceGrid, NormSpec};

fn main() -> pullback::Result<()> {
    let grid = Arc::new(HalfSpaceGrid::new(GridSpec { dim: 2, x_max: 8.0, n1: 48, n2: 16, ..GridSpec::default() })?);
    let angles = [PI / 2.0, 3.0 * PI / 4.0, PI - 0.1];
    let radii = log_spaced(1e-2, 1e4, 12);
    for eps in [0.0, 0.05] {
        let p = PullbackMap::new(Arc::new(CatalogGraph::bump(2, eps, 1.0)?))?;
        let (a, _) = assemble_pullback_laplacian(Arc::clone(&grid), &p, BoundaryCondition::Dirichlet)?;
        for gamma in [0.5, 2.5] {
            let t = sectoriality_scan(&a, 1.0, &angles, &radii, NormSpec::lebesgue(2.0, gamma)?, &NormOptions::default())?;
            let sups: Vec<String> = t.suprema.iter().map(|(th, s)| format!("θ={th:.3}: {s:.4}")).collect();
            println!("ε = {eps}, γ = {gamma}: {}", sups.join("  "));
        }
    }
    Ok(())
}
