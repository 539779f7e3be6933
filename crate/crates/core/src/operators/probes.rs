//! Random probe functions on a grid.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::spaces::{GridFunction, HalfSpaceGrid};

use super::assemble::BoundaryCondition;

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex white noise, one independent Gaussian per node.
pub fn white_noise(grid: &HalfSpaceGrid, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..grid.len())
        .map(|_| Complex64::new(gauss(rng), gauss(rng)))
        .collect()
}

/// A smooth random function: exponential profiles in `x₁` times a few lateral modes.
///
/// With `bc = Some(..)` each profile satisfies the boundary condition at `x₁ = 0`.
pub fn smooth_random(
    grid: &HalfSpaceGrid,
    bc: Option<BoundaryCondition>,
    rng: &mut ChaCha8Rng,
) -> Vec<Complex64> {
    let profiles: Vec<(f64, Complex64)> = (0..3)
        .map(|_| {
            let sigma = (rng.random_range(0.2f64.ln()..3.0f64.ln())).exp();
            (sigma, Complex64::new(gauss(rng), gauss(rng)))
        })
        .collect();
    let modes: Vec<(f64, Complex64, Complex64)> = (0..4)
        .map(|k| {
            let s = 1.0 / (1.0 + (k * k) as f64);
            (
                k as f64,
                Complex64::new(gauss(rng), gauss(rng)) * s,
                Complex64::new(gauss(rng), gauss(rng)) * s,
            )
        })
        .collect();
    let lam = grid.lambda();
    (0..grid.len())
        .map(|idx| {
            let p = grid.point(idx);
            let t = p[0];
            let normal: Complex64 = profiles
                .iter()
                .map(|&(s, a)| {
                    let e = (-s * t).exp();
                    a * match bc {
                        Some(BoundaryCondition::Dirichlet) => s * t * e,
                        Some(BoundaryCondition::Neumann) => (1.0 + s * t) * e,
                        None => e,
                    }
                })
                .sum();
            let lateral: Complex64 = if grid.dim() == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                let th = std::f64::consts::PI * p[1] / lam;
                modes
                    .iter()
                    .map(|&(k, a, b)| a * (k * th).cos() + b * (k * th).sin())
                    .sum()
            };
            normal * lateral
        })
        .collect()
}

/// `count` probes from `seed`: alternating white noise and smooth functions.
pub fn probe_set(grid: &HalfSpaceGrid, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            if k % 2 == 0 {
                smooth_random(grid, None, &mut rng)
            } else {
                white_noise(grid, &mut rng)
            }
        })
        .collect()
}

/// Smooth trial functions compatible with `bc`.
pub fn smooth_trials(
    grid: Arc<HalfSpaceGrid>,
    bc: BoundaryCondition,
    count: usize,
    seed: u64,
) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v = smooth_random(&grid, Some(bc), &mut rng);
            GridFunction::new(Arc::clone(&grid), v).expect("finite probe values")
        })
        .collect()
}
