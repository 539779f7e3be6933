//! Transport of functions between the domain and the half-space along `Ψ`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::PullbackMap;

use super::function::GridFunction;
use super::grid::HalfSpaceGrid;

fn check_dims(p: &PullbackMap, grid: &HalfSpaceGrid) -> Result<()> {
    if p.dim() != grid.dim() {
        return Err(Error::invalid(
            "grid",
            format!("grid dimension {} differs from the domain dimension {}", grid.dim(), p.dim()),
        ));
    }
    Ok(())
}

/// `(Ψ_* f)(y) = f(Ψ⁻¹(y))` at every node.
pub fn pushforward<F>(f: F, p: &PullbackMap, grid: Arc<HalfSpaceGrid>) -> Result<GridFunction>
where
    F: Fn(&[f64]) -> Result<Complex64> + Sync,
{
    check_dims(p, &grid)?;
    let values: Result<Vec<Complex64>> = (0..grid.len())
        .into_par_iter()
        .map(|k| f(&p.psi_inverse(&grid.point(k))?))
        .collect();
    GridFunction::new(grid, values?)
}

/// Piecewise-linear interpolation in `x₁`, periodic linear laterally.
pub fn interpolate(g: &GridFunction, y: &[f64]) -> Result<Complex64> {
    let grid = g.grid();
    let x = grid.normal_nodes();
    if y.len() != grid.dim() {
        return Err(Error::invalid("point", "dimension mismatch"));
    }
    if !(y[0] >= x[0] && y[0] <= x[x.len() - 1]) {
        return Err(Error::OutsideDomain(format!(
            "x₁ = {} outside the node range [{}, {}]",
            y[0],
            x[0],
            x[x.len() - 1]
        )));
    }
    let i = x.partition_point(|&v| v <= y[0]).clamp(1, x.len() - 1) - 1;
    let t = (y[0] - x[i]) / (x[i + 1] - x[i]);
    let n2 = grid.n2();
    let v = g.values();
    if grid.dim() == 1 {
        return Ok(v[i] * (1.0 - t) + v[i + 1] * t);
    }
    let lam = grid.lambda();
    let h = grid.lateral_spacing();
    let u = (y[1] + lam).rem_euclid(2.0 * lam) / h;
    let j = (u.floor() as usize).min(n2 - 1);
    let s = u - j as f64;
    let jn = (j + 1) % n2;
    let at = |i: usize, j: usize| v[i * n2 + j];
    Ok((at(i, j) * (1.0 - s) + at(i, jn) * s) * (1.0 - t)
        + (at(i + 1, j) * (1.0 - s) + at(i + 1, jn) * s) * t)
}

/// `(Ψ^* g)(x) = g(Ψ(x))` by interpolation of the grid function.
pub fn pull_back(g: &GridFunction, p: &PullbackMap, x: &[f64]) -> Result<Complex64> {
    check_dims(p, g.grid())?;
    interpolate(g, &p.psi(x)?)
}
