//! Distance comparability and derivative blow-up checks for a [`PullbackMap`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::graph::BoundaryGraph;
use super::pullback::PullbackMap;

/// Lattice spacing of the distance oracle relative to the support radius.
pub const DEFAULT_LATTICE: f64 = 1.0 / 2000.0;

fn golden_min(mut a: f64, mut b: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Euclidean distance from `x` to the graph `{(h(z̃), z̃)}` by a lateral lattice
/// of the given spacing and golden-section refinement around the best node.
pub fn distance_to_boundary(g: &dyn BoundaryGraph, x: &[f64], spacing: f64) -> f64 {
    let xt = &x[1..];
    let r0 = (x[0] - g.eval(xt)).abs();
    if r0 == 0.0 {
        return 0.0;
    }
    let dist = |z: &[f64]| -> f64 {
        let lat: f64 = z.iter().zip(xt).map(|(a, b)| (a - b) * (a - b)).sum();
        ((x[0] - g.eval(z)).powi(2) + lat).sqrt()
    };
    let n = xt.len();
    let steps = (r0 / spacing).ceil() as i64;
    let mut best = r0;
    let mut best_z = xt.to_vec();
    if n == 1 {
        for k in -steps..=steps {
            let z = [xt[0] + k as f64 * spacing];
            let v = dist(&z);
            if v < best {
                best = v;
                best_z = z.to_vec();
            }
        }
        let c = best_z[0];
        return best.min(golden_min(c - spacing, c + spacing, |t| dist(&[t])).1);
    }
    // coarser lattice in higher dimensions, then coordinate-wise refinement
    let per_axis = steps.min(60);
    let h = r0 / per_axis.max(1) as f64;
    let total = (2 * per_axis + 1).pow(n as u32);
    let mut z = vec![0.0; n];
    for idx in 0..total {
        let mut r = idx;
        for k in 0..n {
            let i = (r % (2 * per_axis + 1)) as f64 - per_axis as f64;
            r /= 2 * per_axis + 1;
            z[k] = xt[k] + i * h;
        }
        let v = dist(&z);
        if v < best {
            best = v;
            best_z = z.clone();
        }
    }
    for _ in 0..4 {
        for k in 0..n {
            let c = best_z[k];
            let mut probe = best_z.clone();
            let (t, v) = golden_min(c - h, c + h, |t: f64| {
                probe[k] = t;
                dist(&probe)
            });
            if v < best {
                best = v;
                best_z[k] = t;
            }
        }
    }
    best
}

/// Random domain points `Ψ⁻¹(y)` with `y₁` log-uniform in `[y1_min, 1]` and
/// lateral coordinates uniform in `[-1.5R, 1.5R]`.
pub fn sample_domain_points(p: &PullbackMap, count: usize, y1_min: f64, seed: u64) -> Result<Vec<Vec<f64>>> {
    if !(y1_min > 0.0 && y1_min < 1.0) {
        return Err(Error::invalid("y1_min", "must lie in (0, 1)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = p.graph().support_radius();
    let d = p.dim();
    (0..count)
        .map(|_| {
            let mut y = vec![0.0; d];
            y[0] = y1_min * (1.0 / y1_min).powf(rng.random::<f64>());
            for v in y.iter_mut().skip(1) {
                *v = 1.5 * r * (2.0 * rng.random::<f64>() - 1.0);
            }
            p.psi_inverse(&y)
        })
        .collect()
}

/// `ρ(x) / dist(x, ∂O)` for each sample, with the oracle lattice spacing `spacing · R`.
pub fn distance_ratios(p: &PullbackMap, samples: &[Vec<f64>], spacing: f64) -> Result<Vec<f64>> {
    let g = p.graph();
    let h = spacing * g.support_radius();
    samples
        .iter()
        .map(|x| {
            let rho = p.regularized_distance(x)?;
            let dist = distance_to_boundary(g, x, h);
            if !(dist > 0.0) {
                return Err(Error::OutsideDomain(format!("sample {x:?} lies on the boundary")));
            }
            Ok(rho / dist)
        })
        .collect()
}

/// Extreme values of `ρ / dist(·, ∂O)` over the samples.
pub fn verify_distance_equivalence(p: &PullbackMap, samples: &[Vec<f64>]) -> Result<(f64, f64)> {
    let r = distance_ratios(p, samples, DEFAULT_LATTICE)?;
    let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Values of one derivative along `y₁ = 2^{-m}` at a fixed lateral point.
#[derive(Debug, Clone)]
pub struct BlowupLine {
    pub lateral: Vec<f64>,
    /// `|∂^α h₂|` per sample.
    pub h2_values: Vec<f64>,
    /// `|∂^α h₁|` at `Ψ⁻¹(y)`, when `|α| ≤ 2`.
    pub h1_values: Option<Vec<f64>>,
    pub h2_slope: Option<f64>,
    pub h1_slope: Option<f64>,
}

/// Result of [`verify_blowup_bounds`].
#[derive(Debug, Clone)]
pub struct BlowupReport {
    pub y1: Vec<f64>,
    /// `(|α| − ℓ₀ − λ₀)₊`.
    pub exponent: f64,
    /// `−exponent − 0.2`.
    pub required_slope: f64,
    pub lines: Vec<BlowupLine>,
    /// Smallest fitted slope over all lines, `None` when every value vanishes.
    pub worst_slope: Option<f64>,
    /// Whether `[O]_{C^{ℓ,λ}} ≤ 1` held for the cached estimate.
    pub hypothesis_holds: bool,
}

impl BlowupReport {
    pub fn passed(&self) -> bool {
        self.worst_slope.is_none_or(|s| s >= self.required_slope)
    }

    pub fn status(&self) -> &'static str {
        match self.worst_slope {
            None => "flat-zero",
            Some(_) if self.passed() => "pass",
            Some(_) => "fail",
        }
    }
}

/// Least-squares slope of `log M(y₁)` against `log y₁`, where `M` is the running
/// maximum of the values from large to small `y₁`.
fn envelope_slope(y1: &[f64], values: &[f64]) -> Option<f64> {
    let scale = values.iter().cloned().fold(0.0, f64::max);
    if !(scale > 1e-300) {
        return None;
    }
    let mut env = Vec::with_capacity(values.len());
    let mut run: f64 = 0.0;
    for &v in values {
        run = run.max(v);
        env.push(run);
    }
    let pts: Vec<(f64, f64)> = y1
        .iter()
        .zip(&env)
        .filter(|(_, &m)| m > 1e-14 * scale)
        .map(|(y, m)| (y.ln(), m.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

/// Sample `∂^α h₂` (and `∂^α h₁` for `|α| ≤ 2`) along `y₁ = 2^{-m}`,
/// `m = 1..=depth`, at the graph centre, its breakpoints and half its radius,
/// and fit log–log slopes.
pub fn verify_blowup_bounds(
    p: &PullbackMap,
    alpha: &[usize],
    ell0: usize,
    lambda0: f64,
    depth: usize,
) -> Result<BlowupReport> {
    let d = p.dim();
    if alpha.len() != d {
        return Err(Error::invalid("alpha", "multi-index length must equal d"));
    }
    if depth < 2 {
        return Err(Error::invalid("dyadic_depth", "need at least two levels"));
    }
    let g = p.graph();
    if ell0 > g.smoothness() || lambda0 > g.holder() || lambda0 < 0.0 {
        return Err(Error::invalid("ell0", "ℓ₀ ≤ ℓ and λ₀ ∈ [0, λ] required"));
    }
    let order: usize = alpha.iter().sum();
    let exponent = (order as f64 - ell0 as f64 - lambda0).max(0.0);
    let y1: Vec<f64> = (1..=depth).map(|m| 0.5f64.powi(m as i32)).collect();

    let r = g.support_radius();
    let mut radii = vec![0.0, 0.5 * r];
    radii.extend(g.breakpoints().into_iter().filter(|&b| b > 0.0));
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup();

    let mut lines = Vec::new();
    for rad in radii {
        let mut lateral = vec![0.0; d - 1];
        lateral[0] = rad;
        let mut h2_values = Vec::with_capacity(depth);
        let mut h1_values = Vec::with_capacity(depth);
        for &t in &y1 {
            let mut y = vec![t];
            y.extend_from_slice(&lateral);
            h2_values.push(p.h2_deriv(alpha, &y)?.abs());
            if order <= 2 {
                h1_values.push(h1_derivative_at_image(p, alpha, &y)?.abs());
            }
        }
        let h2_slope = envelope_slope(&y1, &h2_values);
        let (h1_values, h1_slope) = if order <= 2 {
            let s = envelope_slope(&y1, &h1_values);
            (Some(h1_values), s)
        } else {
            (None, None)
        };
        lines.push(BlowupLine {
            lateral,
            h2_values,
            h1_values,
            h2_slope,
            h1_slope,
        });
    }
    let worst_slope = lines
        .iter()
        .flat_map(|l| [l.h2_slope, l.h1_slope])
        .flatten()
        .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.min(s))));
    Ok(BlowupReport {
        y1,
        exponent,
        required_slope: -exponent - 0.2,
        lines,
        worst_slope,
        hypothesis_holds: p.seminorm() <= 1.0,
    })
}

/// `∂^α h₁` at `x = Ψ⁻¹(y)` for `|α| ≤ 2`.
pub fn h1_derivative_at_image(p: &PullbackMap, alpha: &[usize], y: &[f64]) -> Result<f64> {
    let order: usize = alpha.iter().sum();
    match order {
        0 => Ok(p.h2(y[0], &y[1..])),
        1 => {
            let j = alpha.iter().position(|&a| a == 1).unwrap();
            Ok(p.rho_derivatives_at_image(y)?.h1_gradient()[j])
        }
        2 => {
            let idx: Vec<usize> = alpha
                .iter()
                .enumerate()
                .flat_map(|(i, &a)| std::iter::repeat_n(i, a))
                .collect();
            Ok(-p.rho_derivatives_at_image(y)?.hessian[idx[0]][idx[1]])
        }
        _ => Err(Error::Unsupported(
            "h₁ derivatives beyond order 2 are not computed".into(),
        )),
    }
}
