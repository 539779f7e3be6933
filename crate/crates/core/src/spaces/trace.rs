//! Boundary traces `f|_{x₁=0}` and `∂₁f|_{x₁=0}` by extrapolation from the first layers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::fd_weights;

use super::function::GridFunction;

fn extrapolate(f: &GridFunction, m: usize) -> Result<Vec<Complex64>> {
    let g = f.grid();
    if g.n1() < 3 {
        return Err(Error::invalid("grid", "need at least 3 normal layers"));
    }
    let w = fd_weights(0.0, &g.normal_nodes()[..3], m);
    let n2 = g.n2();
    let v = f.values();
    Ok((0..n2)
        .map(|j| (0..3).map(|i| v[i * n2 + j] * w[i]).sum())
        .collect())
}

/// Quadratic extrapolation of `f` to `x₁ = 0`, one value per lateral node.
pub fn trace_eval(f: &GridFunction) -> Result<Vec<Complex64>> {
    extrapolate(f, 0)
}

/// Derivative at `x₁ = 0` of the quadratic through the first three layers.
pub fn normal_trace_eval(f: &GridFunction) -> Result<Vec<Complex64>> {
    extrapolate(f, 1)
}
