//! Sampled `C^{ℓ,λ}` norms of boundary graphs.

use crate::error::{Error, Result};
use crate::quadrature::halton;

use super::graph::BoundaryGraph;

/// Components of a sampled `‖h‖_{C^{ℓ,λ}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeminormEstimate {
    /// `Σ_{|α| ≤ ℓ} sup |∂^α h|`.
    pub sup_part: f64,
    /// `Σ_{|α| = ℓ} [∂^α h]_λ`; zero when `λ = 0`.
    pub holder_part: f64,
}

impl SeminormEstimate {
    pub fn total(&self) -> f64 {
        self.sup_part + self.holder_part
    }
}

/// All lateral multi-indices of total order `order` in `n` variables.
pub fn multi_indices(n: usize, order: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if order == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=order).rev() {
        for mut tail in multi_indices(n - 1, order - first) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Sampled `[O]_{C^{ℓ,λ}}` over Halton points in the support and point pairs
/// at log-uniform separations.
///
/// The point sets of a smaller `sample_count` are prefixes of the larger ones,
/// so the estimate is nondecreasing in `sample_count`.
pub fn seminorm(g: &dyn BoundaryGraph, ell: usize, lambda: f64, sample_count: usize) -> Result<f64> {
    seminorm_parts(g, ell, lambda, sample_count).map(|e| e.total())
}

pub fn seminorm_parts(
    g: &dyn BoundaryGraph,
    ell: usize,
    lambda: f64,
    sample_count: usize,
) -> Result<SeminormEstimate> {
    if ell > g.smoothness() {
        return Err(Error::invalid(
            "ell",
            format!("ℓ = {ell} exceeds the graph smoothness {}", g.smoothness()),
        ));
    }
    if !(0.0..=1.0).contains(&lambda) || lambda > g.holder() {
        return Err(Error::invalid(
            "lambda",
            format!("λ = {lambda} exceeds the graph Hölder exponent {}", g.holder()),
        ));
    }
    if sample_count < 1000 {
        return Err(Error::invalid("sample_count", "at least 10³ samples required"));
    }
    if ell > g.max_deriv_order() {
        return Err(Error::Unsupported(format!(
            "derivatives of order {ell} are not available for {}",
            g.label()
        )));
    }
    let n = g.dim() - 1;
    let box_half = 1.05 * g.support_radius();
    let point = |i: u64, offset: usize| -> Vec<f64> {
        (0..n)
            .map(|k| box_half * (2.0 * halton(i, offset + k) - 1.0))
            .collect()
    };

    let mut sup_part = 0.0;
    for order in 0..=ell {
        for alpha in multi_indices(n, order) {
            let mut m: f64 = 0.0;
            for i in 0..sample_count as u64 {
                m = m.max(g.deriv(&alpha, &point(i, 0)).abs());
            }
            // the centre often carries the extremum of radial profiles
            m = m.max(g.deriv(&alpha, &vec![0.0; n]).abs());
            sup_part += m;
        }
    }

    let mut holder_part = 0.0;
    if lambda > 0.0 {
        let r = g.support_radius();
        let (dmin, dmax) = (1e-6 * r, 2.0 * r);
        for alpha in multi_indices(n, ell) {
            let mut m: f64 = 0.0;
            for i in 0..sample_count as u64 {
                let x = point(i, 0);
                let sep = dmin * (dmax / dmin).powf(halton(i, n));
                // random direction from further Halton coordinates
                let mut dir: Vec<f64> = (0..n).map(|k| 2.0 * halton(i, n + 1 + k) - 1.0).collect();
                let dn = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
                for v in &mut dir {
                    *v /= dn;
                }
                let y: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + sep * b).collect();
                let diff = (g.deriv(&alpha, &x) - g.deriv(&alpha, &y)).abs();
                m = m.max(diff / sep.powf(lambda));
            }
            holder_part += m;
        }
    }
    Ok(SeminormEstimate {
        sup_part,
        holder_part,
    })
}
