//! Operator-norm estimates in weighted Sobolev norms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spaces::{weight_vector, HalfSpaceGrid, NormSpec, SobolevNorm};

use super::probes::probe_set;

/// A linear map on grid values together with its unweighted adjoint.
///
/// The output may stack several grid functions (for example the components of
/// a gradient); their norms combine in the `p`-sum.
pub trait LinearMap: Sync {
    fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>>;
    /// `Tᴴ x` in the plain Euclidean inner product.
    fn apply_adjoint(&self, x: &[Complex64]) -> Result<Vec<Complex64>>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormOptions {
    pub power_iterations: usize,
    /// relative change that stops the power iteration
    pub tolerance: f64,
    pub probes: usize,
    pub seed: u64,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            power_iterations: 20,
            tolerance: 1e-3,
            probes: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    /// power iteration on `T^♯T` in the weighted inner product
    PowerIteration,
    /// maximum ratio over random probes, a lower bound
    Probes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub method: NormMethod,
}

/// Estimates `‖T‖` on `W^{k,p}(w_γ)` of `grid`.
///
/// Unweighted `L²(w_γ)` uses power iteration with the weighted adjoint
/// `D⁻¹TᴴD`; every other space uses the probe maximum.
pub fn estimate_norm(
    map: &dyn LinearMap,
    grid: &HalfSpaceGrid,
    spec: NormSpec,
    opts: &NormOptions,
) -> Result<NormEstimate> {
    if spec.k == 0 && spec.p == 2.0 {
        power_iteration(map, grid, spec, opts)
    } else {
        probe_maximum(map, grid, spec, opts)
    }
}

fn power_iteration(
    map: &dyn LinearMap,
    grid: &HalfSpaceGrid,
    spec: NormSpec,
    opts: &NormOptions,
) -> Result<NormEstimate> {
    if opts.power_iterations == 0 {
        return Err(Error::invalid("power_iterations", "must be positive"));
    }
    let d = weight_vector(grid, spec.gamma);
    let n = d.len();
    let norm = |v: &[Complex64]| {
        v.iter()
            .enumerate()
            .map(|(k, z)| d[k % n] * z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let mut v = probe_set(grid, 1, opts.seed).pop().unwrap();
    let n0 = norm(&v);
    v.iter_mut().for_each(|z| *z /= n0);
    let mut best = 0.0f64;
    let mut prev = f64::NAN;
    for it in 1..=opts.power_iterations {
        let u = map.apply(&v)?;
        let est = norm(&u);
        best = best.max(est);
        if est == 0.0 {
            return Ok(NormEstimate {
                value: 0.0,
                iterations: it,
                converged: true,
                method: NormMethod::PowerIteration,
            });
        }
        if (est - prev).abs() <= opts.tolerance * est {
            return Ok(NormEstimate {
                value: best,
                iterations: it,
                converged: true,
                method: NormMethod::PowerIteration,
            });
        }
        prev = est;
        let du: Vec<Complex64> = u.iter().enumerate().map(|(k, z)| z * d[k % n]).collect();
        let mut next = map.apply_adjoint(&du)?;
        next.iter_mut().zip(&d).for_each(|(z, w)| *z /= w);
        let nn = norm(&next);
        if !(nn > 0.0) {
            break;
        }
        next.iter_mut().for_each(|z| *z /= nn);
        v = next;
    }
    Ok(NormEstimate {
        value: best,
        iterations: opts.power_iterations,
        converged: false,
        method: NormMethod::PowerIteration,
    })
}

fn probe_maximum(
    map: &dyn LinearMap,
    grid: &HalfSpaceGrid,
    spec: NormSpec,
    opts: &NormOptions,
) -> Result<NormEstimate> {
    if opts.probes == 0 {
        return Err(Error::invalid("probes", "must be positive"));
    }
    let sob = SobolevNorm::new(grid, spec)?;
    let n = grid.len();
    let mut best = 0.0f64;
    for v in probe_set(grid, opts.probes, opts.seed) {
        let nv = sob.eval_values(grid, &v);
        if nv > 0.0 {
            let out = map.apply(&v)?;
            let nt: f64 = out
                .chunks(n)
                .map(|c| sob.eval_values(grid, c).powf(spec.p))
                .sum::<f64>()
                .powf(1.0 / spec.p);
            best = best.max(nt / nv);
        }
    }
    Ok(NormEstimate {
        value: best,
        iterations: opts.probes,
        converged: true,
        method: NormMethod::Probes,
    })
}
