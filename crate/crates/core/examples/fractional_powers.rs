//! Fractional powers of the Dirichlet Laplacian and the Riesz transform norm.

use std::sync::Arc;

use pullback::calculus::{riesz_transform_norm, FractionalPowers};
use pullback::operators::{assemble_laplacian, probe_set, BoundaryCondition, NormOptions};
use pullback::spaces::{GridSpec, HalfSpaceGrid, NormSpec};

fn rel(a: &[num_complex::Complex64], b: &[num_complex::Complex64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let n: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (d / n).sqrt()
}

fn main() -> pullback::Result<()> {
    let grid = Arc::new(HalfSpaceGrid::new(GridSpec { n1: 128, ..GridSpec::default() })?);
    let lap = assemble_laplacian(Arc::clone(&grid), BoundaryCondition::Dirichlet);
    let a = lap.shifted(0.5)?;
    let pw = FractionalPowers::new(&a)?;
    let v = probe_set(&grid, 1, 3).pop().unwrap();

    let half = pw.inverse_apply(0.5, &v)?;
    let quarters = pw.inverse_apply(0.25, &pw.inverse_apply(0.25, &v)?)?;
    println!("A^-1/4 A^-1/4 vs A^-1/2: {:.2e}", rel(&quarters, &half));
    let square = pw.apply(0.5, &pw.apply(0.5, &v)?)?;
    println!("A^1/2 A^1/2 vs A:        {:.2e}", rel(&square, &a.apply_values(&v)));
    let mixed = pw.inverse_apply(0.5, &pw.inverse_apply(0.3, &v)?)?;
    println!("A^-1/2 A^-0.3 vs A^-0.8: {:.2e}", rel(&mixed, &pw.inverse_apply(0.8, &v)?));

    let opts = NormOptions { power_iterations: 60, tolerance: 1e-6, ..NormOptions::default() };
    for gamma in [0.0, 0.5, 2.5] {
        let est = riesz_transform_norm(&lap, NormSpec::lebesgue(2.0, gamma)?, &opts)?;
        println!("‖∇(−Δ)^-1/2‖ on L2(x^{gamma}): {:.4} after {} iterations", est.value, est.iterations);
    }
    Ok(())
}
