//! Empirical H∞-calculus constants of the shifted Laplacian, flat and curved.

use std::sync::Arc;

use pullback::calculus::{hinfty_bound_estimates, standard_family, ContourSpec, FAMILY_OMEGA};
use pullback::geometry::{CatalogGraph, PullbackMap};
use pullback::operators::{assemble_pullback_laplacian, probe_set, BoundaryCondition};
use pullback::spaces::{GridSpec, HalfSpaceGrid, NormSpec};

fn main() -> pullback::Result<()> {
    let grid = Arc::new(HalfSpaceGrid::new(GridSpec { dim: 2, x_max: 8.0, n1: 48, n2: 16, ..GridSpec::default() })?);
    let family = standard_family(FAMILY_OMEGA)?;
    for f in &family {
        println!("{:<22} sup on the sector {:.4}", f.label(), f.hinf_norm());
    }
    let probes = probe_set(&grid, 8, 1);
    let specs = [NormSpec::new(0, 2.0, 0.0)?, NormSpec::new(0, 2.0, 1.5)?, NormSpec::new(1, 2.0, 0.5)?];
    for eps in [0.0, 0.05] {
        let p = PullbackMap::new(Arc::new(CatalogGraph::bump(2, eps, 1.0)?))?;
        let b = assemble_pullback_laplacian(Arc::clone(&grid), &p, BoundaryCondition::Dirichlet)?.0.shifted(1.0)?;
        for r in hinfty_bound_estimates(&b, &family, &ContourSpec::default(), &probes, &specs)? {
            println!("ε = {eps}, k = {}, γ = {}: constant {:.4}", r.spec.k, r.spec.gamma, r.constant);
        }
    }
    Ok(())
}
