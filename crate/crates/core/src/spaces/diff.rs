//! Derivatives of grid functions for norm evaluation.
//!
//! Normal derivatives use three-point nonuniform stencils with one-sided
//! closures (four points for the second derivative); lateral derivatives are
//! spectral on the periodic grid. No boundary condition is imposed.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::quadrature::fd_weights;

use super::function::GridFunction;
use super::grid::HalfSpaceGrid;

/// Per-node stencils `(first index, weights)` along the normal axis.
#[derive(Debug, Clone)]
pub struct NormalStencils {
    pub d1: Vec<(usize, Vec<f64>)>,
    pub d2: Vec<(usize, Vec<f64>)>,
}

impl NormalStencils {
    pub fn new(x: &[f64]) -> Self {
        let n = x.len();
        assert!(n >= 4);
        let d1 = (0..n)
            .map(|i| {
                let s = i.saturating_sub(1).min(n - 3);
                (s, fd_weights(x[i], &x[s..s + 3], 1))
            })
            .collect();
        let d2 = (0..n)
            .map(|i| {
                if i == 0 || i == n - 1 {
                    let s = if i == 0 { 0 } else { n - 4 };
                    (s, fd_weights(x[i], &x[s..s + 4], 2))
                } else {
                    (i - 1, fd_weights(x[i], &x[i - 1..i + 2], 2))
                }
            })
            .collect();
        NormalStencils { d1, d2 }
    }

    fn apply(st: &[(usize, Vec<f64>)], line: &[Complex64]) -> Vec<Complex64> {
        st.iter()
            .map(|(s, w)| w.iter().enumerate().map(|(k, c)| line[s + k] * c).sum())
            .collect()
    }
}

/// `∂₁^{a1} ∂₂^{a2} f` at the nodes.
pub fn partial(f: &GridFunction, a1: usize, a2: usize) -> Vec<Complex64> {
    let grid = f.grid();
    let st = NormalStencils::new(grid.normal_nodes());
    partial_with(grid, &st, f.values(), a1, a2)
}

pub(crate) fn partial_with(
    grid: &HalfSpaceGrid,
    st: &NormalStencils,
    values: &[Complex64],
    a1: usize,
    a2: usize,
) -> Vec<Complex64> {
    let (n1, n2) = (grid.n1(), grid.n2());
    let mut out = values.to_vec();
    if a1 > 0 {
        let mut line = vec![Complex64::new(0.0, 0.0); n1];
        for j in 0..n2 {
            for i in 0..n1 {
                line[i] = out[i * n2 + j];
            }
            for _ in 0..a1 / 2 {
                line = NormalStencils::apply(&st.d2, &line);
            }
            if a1 % 2 == 1 {
                line = NormalStencils::apply(&st.d1, &line);
            }
            for i in 0..n1 {
                out[i * n2 + j] = line[i];
            }
        }
    }
    if a2 > 0 {
        if grid.dim() == 1 {
            return vec![Complex64::new(0.0, 0.0); out.len()];
        }
        lateral_spectral(&mut out, n1, n2, grid.lambda(), a2);
    }
    out
}

/// In-place spectral `∂₂^m` on each normal layer.
fn lateral_spectral(values: &mut [Complex64], n1: usize, n2: usize, lambda: f64, m: usize) {
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n2);
    let inv = planner.plan_fft_inverse(n2);
    let base = std::f64::consts::PI / lambda;
    let factors: Vec<Complex64> = (0..n2)
        .map(|k| {
            let kk = if k <= n2 / 2 { k as i64 } else { k as i64 - n2 as i64 };
            if n2 % 2 == 0 && k == n2 / 2 && m % 2 == 1 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new(0.0, base * kk as f64).powu(m as u32) / n2 as f64
        })
        .collect();
    for i in 0..n1 {
        let row = &mut values[i * n2..(i + 1) * n2];
        fwd.process(row);
        for (v, c) in row.iter_mut().zip(&factors) {
            *v *= c;
        }
        inv.process(row);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::grid::GridSpec;
    use std::sync::Arc;

    #[test]
    fn normal_derivatives_of_exponential() {
        let grid = Arc::new(HalfSpaceGrid::new(GridSpec { n1: 512, ..GridSpec::default() }).unwrap());
        let f = GridFunction::from_real_fn(Arc::clone(&grid), |x| (-x[0]).exp());
        let d1 = partial(&f, 1, 0);
        let d2 = partial(&f, 2, 0);
        for (k, x) in grid.normal_nodes().iter().enumerate() {
            let e = (-x).exp();
            assert!((d1[k].re + e).abs() < 2e-3, "d1 at {x}");
            assert!((d2[k].re - e).abs() < 2e-2, "d2 at {x}");
        }
    }

    #[test]
    fn lateral_derivative_is_spectral() {
        let grid = Arc::new(
            HalfSpaceGrid::new(GridSpec {
                dim: 2,
                n1: 64,
                n2: 32,
                ..GridSpec::default()
            })
            .unwrap(),
        );
        let w = std::f64::consts::PI / 2.0;
        let f = GridFunction::from_real_fn(Arc::clone(&grid), |x| (w * 3.0 * x[1]).sin());
        let d = partial(&f, 0, 2);
        for k in 0..grid.len() {
            let x = grid.point(k);
            let exact = -(3.0 * w).powi(2) * (w * 3.0 * x[1]).sin();
            assert!((d[k].re - exact).abs() < 1e-10);
        }
    }
}
