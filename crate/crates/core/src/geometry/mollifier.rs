//! Smooth compactly supported bumps `η` on `R` and `ϕ` on `R^{d-1}`.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Half-width of the bump supports, `1/√2`.
pub const HALF_WIDTH: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Default Gauss–Legendre order per axis.
pub const DEFAULT_ORDER: usize = 64;

/// `exp(-1/(1 - 2 r²))` for `2r² < 1`, zero outside.
#[inline]
fn bump_sq(r2: f64) -> f64 {
    let t = 1.0 - 2.0 * r2;
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Taylor jet `[b(w), b'(w), ..., b^{(n)}(w)]` of `b(w) = exp(-1/(1-2w²))`.
///
/// Uses the partial fractions of the exponent and the exponential-series
/// recurrence, which stays accurate up to the support edge.
pub fn bump_jet(w: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    let a = 1.0 - SQRT_2 * w;
    let b = 1.0 + SQRT_2 * w;
    if a <= 0.0 || b <= 0.0 {
        return out;
    }
    let e0 = (-1.0 / (a * b)).exp();
    if e0 == 0.0 {
        return out;
    }
    // Taylor coefficients of g(w + t) = -1/2 [1/(1-√2(w+t)) + 1/(1+√2(w+t))].
    let mut g = vec![0.0; n + 1];
    let (mut pa, mut pb) = (1.0 / a, 1.0 / b);
    let (ra, rb) = (SQRT_2 / a, -SQRT_2 / b);
    for gk in g.iter_mut() {
        *gk = -0.5 * (pa + pb);
        pa *= ra;
        pb *= rb;
    }
    let mut e = vec![0.0; n + 1];
    e[0] = e0;
    for m in 1..=n {
        let mut acc = 0.0;
        for k in 1..=m {
            acc += k as f64 * g[k] * e[m - k];
        }
        e[m] = acc / m as f64;
    }
    let mut fact = 1.0;
    for (m, o) in out.iter_mut().enumerate() {
        if m > 0 {
            fact *= m as f64;
        }
        *o = fact * e[m];
    }
    out
}

/// The mollifier pair `φ = η ⊗ ϕ` and a tensor Gauss–Legendre rule on its support box.
#[derive(Debug, Clone)]
pub struct MollifierSpec {
    lateral_dim: usize,
    order: usize,
    eta_scale: f64,
    phi_scale: f64,
    /// Gauss–Legendre rule on `[-1, 1]`.
    base_nodes: Vec<f64>,
    base_weights: Vec<f64>,
    /// Non-zero tensor nodes on the lateral box, flattened, and `weight · ϕ`.
    lateral_points: Vec<f64>,
    lateral_weights: Vec<f64>,
}

impl MollifierSpec {
    pub fn new(lateral_dim: usize, order: usize) -> Result<Self> {
        if lateral_dim == 0 {
            return Err(Error::invalid("lateral_dim", "must be at least 1"));
        }
        if order < 8 {
            return Err(Error::invalid("order", "at least 8 nodes per axis required"));
        }
        let (base_nodes, base_weights) = gauss_legendre(order);
        let nodes: Vec<f64> = base_nodes.iter().map(|t| t * HALF_WIDTH).collect();
        let weights: Vec<f64> = base_weights.iter().map(|w| w * HALF_WIDTH).collect();

        let eta_mass: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(t, w)| w * bump_sq(t * t))
            .sum();

        let total = order
            .checked_pow(lateral_dim as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| Error::invalid("order", "tensor rule too large for this dimension"))?;
        let mut lateral_points = Vec::new();
        let mut lateral_weights = Vec::new();
        let mut idx = vec![0usize; lateral_dim];
        let mut z = vec![0.0; lateral_dim];
        for _ in 0..total {
            let mut w = 1.0;
            let mut r2 = 0.0;
            for (k, &i) in idx.iter().enumerate() {
                z[k] = nodes[i];
                w *= weights[i];
                r2 += nodes[i] * nodes[i];
            }
            let b = bump_sq(r2);
            if b > 0.0 {
                lateral_points.extend_from_slice(&z);
                lateral_weights.push(w * b);
            }
            for k in 0..lateral_dim {
                idx[k] += 1;
                if idx[k] < order {
                    break;
                }
                idx[k] = 0;
            }
        }
        let phi_mass: f64 = lateral_weights.iter().sum();
        let phi_scale = 1.0 / phi_mass;
        for w in &mut lateral_weights {
            *w *= phi_scale;
        }
        Ok(MollifierSpec {
            lateral_dim,
            order,
            eta_scale: 1.0 / eta_mass,
            phi_scale,
            base_nodes,
            base_weights,
            lateral_points,
            lateral_weights,
        })
    }

    pub fn lateral_dim(&self) -> usize {
        self.lateral_dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn eta(&self, t: f64) -> f64 {
        self.eta_scale * bump_sq(t * t)
    }

    pub fn phi(&self, z: &[f64]) -> f64 {
        self.phi_scale * bump_sq(z.iter().map(|v| v * v).sum())
    }

    /// Derivatives `ϕ^{(k)}(w)`, `k = 0..=n`; only for one lateral dimension.
    pub fn phi_jet(&self, w: f64, n: usize) -> Vec<f64> {
        debug_assert_eq!(self.lateral_dim, 1);
        let mut j = bump_jet(w, n);
        for v in &mut j {
            *v *= self.phi_scale;
        }
        j
    }

    /// Gauss–Legendre rule on `[-1, 1]` of the configured order.
    pub fn base_rule(&self) -> (&[f64], &[f64]) {
        (&self.base_nodes, &self.base_weights)
    }

    /// Lateral nodes inside the support (flattened, `lateral_dim` per node)
    /// with weights already multiplied by `ϕ`.
    pub fn lateral_rule(&self) -> (&[f64], &[f64]) {
        (&self.lateral_points, &self.lateral_weights)
    }

    /// Quadrature of `η` over its support box.
    pub fn eta_mass(&self) -> f64 {
        self.base_nodes
            .iter()
            .zip(&self.base_weights)
            .map(|(t, w)| w * HALF_WIDTH * self.eta(t * HALF_WIDTH))
            .sum()
    }

    /// Quadrature of `ϕ` over its support box.
    pub fn phi_mass(&self) -> f64 {
        self.lateral_weights.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_masses() {
        for dim in 1..=2 {
            let m = MollifierSpec::new(dim, 64).unwrap();
            assert!((m.eta_mass() - 1.0).abs() < 1e-12);
            assert!((m.phi_mass() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mass_is_stable_across_orders() {
        // normalisation at order 64 integrates to one under an independent 128-point rule
        let m = MollifierSpec::new(1, 64).unwrap();
        let (x, w) = gauss_legendre(128);
        let mass: f64 = x
            .iter()
            .zip(&w)
            .map(|(t, w)| w * HALF_WIDTH * m.eta(t * HALF_WIDTH))
            .sum();
        assert!((mass - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eta_is_even_and_supported() {
        let m = MollifierSpec::new(1, 32).unwrap();
        for &t in &[0.0, 0.1, 0.3, 0.7, 0.70710] {
            assert_eq!(m.eta(t), m.eta(-t));
        }
        assert_eq!(m.eta(HALF_WIDTH), 0.0);
        assert_eq!(m.eta(1.0), 0.0);
    }

    #[test]
    fn jet_matches_finite_differences() {
        // Richardson-extrapolated central differences
        let cd = |w: f64, k: usize, h: f64| (bump_jet(w + h, 4)[k] - bump_jet(w - h, 4)[k]) / (2.0 * h);
        for &w in &[-0.5, -0.1, 0.0, 0.2, 0.6] {
            let j = bump_jet(w, 4);
            assert!((j[0] - bump_sq(w * w)).abs() < 1e-15);
            for k in 0..4 {
                let fd = (4.0 * cd(w, k, 5e-4) - cd(w, k, 1e-3)) / 3.0;
                assert!(
                    (fd - j[k + 1]).abs() < 1e-6 * (1.0 + j[k + 1].abs()),
                    "w={w} k={k}: {fd} vs {}",
                    j[k + 1]
                );
            }
        }
    }

    #[test]
    fn jet_vanishes_outside_support() {
        assert!(bump_jet(0.75, 3).iter().all(|&v| v == 0.0));
        assert!(bump_jet(0.7071, 6).iter().all(|v| v.is_finite()));
    }
}
