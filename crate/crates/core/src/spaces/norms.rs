//! Weighted Lebesgue and Sobolev norms with the power weight `x₁^γ`.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::diff::{partial_with, NormalStencils};
use super::function::GridFunction;
use super::grid::HalfSpaceGrid;

/// Highest derivative order the norm stencils support.
pub const MAX_ORDER: usize = 4;

/// `W^{k,p}(w_γ)` parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub k: usize,
    pub p: f64,
    pub gamma: f64,
}

impl NormSpec {
    /// Validates `p ∈ (1, ∞)`, `γ > −1` and `γ ∉ {jp − 1 : j = 1..k+3}`.
    pub fn new(k: usize, p: f64, gamma: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::invalid("p", format!("p = {p} must lie in (1, ∞)")));
        }
        if !(gamma > -1.0) || !gamma.is_finite() {
            return Err(Error::invalid("gamma", format!("γ = {gamma} must exceed −1")));
        }
        for j in 1..=k + 3 {
            if (gamma - (j as f64 * p - 1.0)).abs() < 1e-12 {
                return Err(Error::invalid(
                    "gamma",
                    format!("γ = {j}p−1 = {gamma} is excluded"),
                ));
            }
        }
        if k > MAX_ORDER {
            return Err(Error::invalid("k", format!("orders above {MAX_ORDER} are not supported")));
        }
        Ok(NormSpec { k, p, gamma })
    }

    pub fn lebesgue(p: f64, gamma: f64) -> Result<Self> {
        Self::new(0, p, gamma)
    }

    pub fn is_hilbert(&self) -> bool {
        self.p == 2.0
    }
}

/// Node weights: the cell moment of `x₁^γ` times the lateral spacing.
pub fn weight_vector(grid: &HalfSpaceGrid, gamma: f64) -> Vec<f64> {
    let m = grid.normal_moments(gamma);
    let dx2 = grid.lateral_spacing();
    (0..grid.len()).map(|k| m[k / grid.n2()] * dx2).collect()
}

pub(crate) fn lp_of_values(values: &[Complex64], weights: &[f64], p: f64) -> f64 {
    let s: f64 = values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * v.norm().powf(p))
        .sum();
    s.powf(1.0 / p)
}

/// `(Σ_i w_i x₁^γ |f_i|^p)^{1/p}`. Any real `γ` is accepted so that shifted weights
/// such as `γ − p` can be evaluated; the grid has no node on `x₁ = 0`.
pub fn lp_norm(f: &GridFunction, p: f64, gamma: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::invalid("p", format!("p = {p} must lie in (1, ∞)")));
    }
    if !gamma.is_finite() {
        return Err(Error::invalid("gamma", "must be finite"));
    }
    Ok(lp_of_values(f.values(), &weight_vector(f.grid(), gamma), p))
}

/// Reusable evaluator for `‖·‖_{W^{k,p}(w_γ)}` on one grid.
#[derive(Debug, Clone)]
pub struct SobolevNorm {
    spec: NormSpec,
    weights: Vec<f64>,
    stencils: NormalStencils,
    orders: Vec<(usize, usize)>,
}

impl SobolevNorm {
    pub fn new(grid: &HalfSpaceGrid, spec: NormSpec) -> Result<Self> {
        if grid.n1() < 2 * spec.k + 4 {
            return Err(Error::invalid("k", "grid too small for the derivative stencils"));
        }
        let mut orders = Vec::new();
        for total in 0..=spec.k {
            for a2 in 0..=total {
                if grid.dim() == 1 && a2 > 0 {
                    continue;
                }
                orders.push((total - a2, a2));
            }
        }
        Ok(SobolevNorm {
            spec,
            weights: weight_vector(grid, spec.gamma),
            stencils: NormalStencils::new(grid.normal_nodes()),
            orders,
        })
    }

    pub fn spec(&self) -> NormSpec {
        self.spec
    }

    /// Norm of raw node values on the evaluator's grid.
    pub fn eval_values(&self, grid: &HalfSpaceGrid, values: &[Complex64]) -> f64 {
        let p = self.spec.p;
        let s: f64 = self
            .orders
            .iter()
            .map(|&(a1, a2)| {
                let d = if a1 == 0 && a2 == 0 {
                    values.to_vec()
                } else {
                    partial_with(grid, &self.stencils, values, a1, a2)
                };
                lp_of_values(&d, &self.weights, p).powf(p)
            })
            .sum();
        s.powf(1.0 / p)
    }

    pub fn eval(&self, f: &GridFunction) -> f64 {
        self.eval_values(f.grid(), f.values())
    }
}

/// `(Σ_{|α| ≤ k} ‖∂^α f‖_{L^p(w_γ)}^p)^{1/p}`.
pub fn sobolev_norm(f: &GridFunction, spec: NormSpec) -> Result<f64> {
    Ok(SobolevNorm::new(f.grid(), spec)?.eval(f))
}

/// `(‖u‖_{L^p(w_{γ−sp})}, ‖u‖_{W^{k,p}(w_γ)})` for the weighted embedding.
pub fn embedding_check(u: &GridFunction, spec: NormSpec, s: usize) -> Result<(f64, f64)> {
    if spec.k < s {
        return Err(Error::invalid("s", "need k ≥ s"));
    }
    let shifted = spec.gamma - s as f64 * spec.p;
    if !(shifted > -1.0) {
        return Err(Error::invalid(
            "gamma",
            format!("need γ > sp − 1 = {}", s as f64 * spec.p - 1.0),
        ));
    }
    Ok((lp_norm(u, spec.p, shifted)?, sobolev_norm(u, spec)?))
}
