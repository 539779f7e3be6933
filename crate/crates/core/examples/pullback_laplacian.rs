//! The flattened Laplacian on a bump domain: coefficient fields, relative
//! perturbation bounds and closed-form resolvents on the flat half-line.

use std::sync::Arc;

use num_complex::Complex64;

use pullback::geometry::{CatalogGraph, PullbackMap};
use pullback::operators::{
    assemble_laplacian, assemble_perturbation, perturbation_coefficients, perturbation_ratio,
    resolvent_solve, smooth_trials, BoundaryCondition, OperatorLabel,
};
use pullback::spaces::{GridFunction, GridSpec, HalfSpaceGrid, NormSpec};

fn main() -> pullback::Result<()> {
    let grid = Arc::new(HalfSpaceGrid::new(GridSpec { dim: 2, x_max: 8.0, n1: 48, n2: 32, ..GridSpec::default() })?);
    let bc = BoundaryCondition::Dirichlet;
    let a = assemble_laplacian(Arc::clone(&grid), bc).shifted(1.0)?;
    let trials = smooth_trials(Arc::clone(&grid), bc, 16, 1);
    let spec = NormSpec::lebesgue(2.0, 0.5)?;

    let mut prev: Option<f64> = None;
    for eps in [0.0125, 0.025, 0.05, 0.1] {
        let p = PullbackMap::new(Arc::new(CatalogGraph::bump(2, eps, 1.0)?))?;
        let c = perturbation_coefficients(&grid, &p)?;
        let b = assemble_perturbation(Arc::clone(&grid), &c, bc, OperatorLabel::PullbackLaplacian)?;
        let eta = perturbation_ratio(&b, &a, &trials, spec)?;
        let c1 = c.c1.iter().cloned().fold(0.0, f64::max);
        let c3 = c.weighted_c3_bound(&grid, 1.0);
        print!("ε = {eps:<6} max c1 {c1:.3e}  max |c3| {c3:.3e}  η = {eta:.4e}");
        if let Some(e) = prev {
            print!("  ratio {:.3}", eta / e);
        }
        println!();
        prev = Some(eta);
    }

    // (1 − ∂²)⁻¹ e^{−t}: t e^{−t}/2 with Dirichlet, (t + 1) e^{−t}/2 with Neumann
    let line = Arc::new(HalfSpaceGrid::new(GridSpec { n1: 256, ..GridSpec::default() })?);
    let f = GridFunction::from_real_fn(Arc::clone(&line), |x| (-x[0]).exp());
    for (bc, exact) in [
        (BoundaryCondition::Dirichlet, (|t: f64| 0.5 * t * (-t).exp()) as fn(f64) -> f64),
        (BoundaryCondition::Neumann, |t: f64| 0.5 * (t + 1.0) * (-t).exp()),
    ] {
        let lap = assemble_laplacian(Arc::clone(&line), bc);
        let u = resolvent_solve(&lap, Complex64::new(1.0, 0.0), &f)?;
        let err = (0..line.len())
            .map(|k| (u.values()[k].re - exact(line.x1(k))).abs())
            .fold(0.0, f64::max);
        println!("{}: max error {err:.2e}", bc.name());
    }
    Ok(())
}
