//! Boundary graphs `h: R^{d-1} -> R` with compact support.

use std::fmt;

use crate::error::{Error, Result};

/// Smoothness order used for graphs that are C^∞.
pub const SMOOTH: usize = 64;

/// A compactly supported boundary function with analytic derivatives.
///
/// The special domain is `{x : x_1 > h(x̃)}`. Lateral points `x̃` are passed as
/// slices of length `dim() - 1`; lateral multi-indices likewise.
pub trait BoundaryGraph: Send + Sync + fmt::Debug {
    /// Ambient dimension `d`.
    fn dim(&self) -> usize;
    /// Integer smoothness `ℓ` (class `C^{ℓ,λ}`).
    fn smoothness(&self) -> usize;
    /// Hölder exponent `λ ∈ [0, 1]`.
    fn holder(&self) -> f64;
    fn support_radius(&self) -> f64;
    fn eval(&self, x: &[f64]) -> f64;
    /// `∂^α h(x̃)`; `alpha.len() == dim() - 1` and `|α| <= max_deriv_order()`.
    fn deriv(&self, alpha: &[usize], x: &[f64]) -> f64;
    /// Highest derivative order `deriv` can evaluate (pointwise almost everywhere).
    fn max_deriv_order(&self) -> usize;
    /// Radii `|x̃|` across which derivatives of `h` lose smoothness.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
    fn label(&self) -> String;
}

/// Polynomial in one variable, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq)]
struct Poly(Vec<f64>);

impl Poly {
    fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    /// `(1 - r²/R²)^n` expanded in `r`.
    fn one_minus_square_pow(radius: f64, n: usize) -> Poly {
        let mut coeffs = vec![0.0; 2 * n + 1];
        let inv = 1.0 / (radius * radius);
        let mut binom = 1.0;
        for k in 0..=n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[2 * k] = sign * binom * inv.powi(k as i32);
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        Poly(coeffs)
    }
}

/// Radial profile `H(r) = ε r^β P(r)` on `r < R`, zero outside.
#[derive(Debug, Clone, PartialEq)]
struct RadialProfile {
    eps: f64,
    beta: f64,
    poly: Poly,
    radius: f64,
}

impl RadialProfile {
    /// `H^{(k)}(r)` for `0 <= r`.
    fn deriv(&self, k: usize, r: f64) -> f64 {
        if r >= self.radius {
            return 0.0;
        }
        let mut p = self.poly.clone();
        let mut derivs = Vec::with_capacity(k + 1);
        for _ in 0..=k {
            derivs.push(p.eval(r));
            p = p.derivative();
        }
        let mut total = 0.0;
        let mut binom = 1.0;
        for j in 0..=k {
            // j-th derivative of r^β: β(β-1)...(β-j+1) r^{β-j}
            let mut falling = 1.0;
            for i in 0..j {
                falling *= self.beta - i as f64;
            }
            let poly_part = derivs[k - j];
            if falling != 0.0 && poly_part != 0.0 {
                total += binom * falling * r.powf(self.beta - j as f64) * poly_part;
            }
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        self.eps * total
    }
}

/// The boundary catalog: `zero`, `bump(eps, R)` and `cone_smoothed(eps, lambda, R)`.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogGraph {
    Zero {
        dim: usize,
    },
    /// `ε (1 - |x̃|²/R²)²₊`, a `C^{1,1}` bump.
    Bump {
        dim: usize,
        eps: f64,
        radius: f64,
    },
    /// `ε |x̃|^{1+λ} (1 - |x̃|²/R²)³₊`, a `C^{1,λ}` profile with a cone-like tip.
    ConeSmoothed {
        dim: usize,
        eps: f64,
        lambda: f64,
        radius: f64,
    },
}

impl CatalogGraph {
    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(CatalogGraph::Zero { dim })
    }

    pub fn bump(dim: usize, eps: f64, radius: f64) -> Result<Self> {
        check_dim(dim)?;
        check_finite("eps", eps)?;
        if radius.is_nan() || radius <= 0.0 {
            return Err(Error::invalid("radius", "support radius must be positive"));
        }
        Ok(CatalogGraph::Bump { dim, eps, radius })
    }

    pub fn cone_smoothed(dim: usize, eps: f64, lambda: f64, radius: f64) -> Result<Self> {
        check_dim(dim)?;
        check_finite("eps", eps)?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::invalid("lambda", "Hölder exponent must lie in [0, 1]"));
        }
        if radius.is_nan() || radius <= 0.0 {
            return Err(Error::invalid("radius", "support radius must be positive"));
        }
        Ok(CatalogGraph::ConeSmoothed {
            dim,
            eps,
            lambda,
            radius,
        })
    }

    fn profile(&self) -> Option<RadialProfile> {
        match *self {
            CatalogGraph::Zero { .. } => None,
            CatalogGraph::Bump { eps, radius, .. } => Some(RadialProfile {
                eps,
                beta: 0.0,
                poly: Poly::one_minus_square_pow(radius, 2),
                radius,
            }),
            CatalogGraph::ConeSmoothed {
                eps, lambda, radius, ..
            } => Some(RadialProfile {
                eps,
                beta: 1.0 + lambda,
                poly: Poly::one_minus_square_pow(radius, 3),
                radius,
            }),
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::invalid("dim", "ambient dimension must be at least 2"));
    }
    Ok(())
}

fn check_finite(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::invalid(name, "must be finite"));
    }
    Ok(())
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl BoundaryGraph for CatalogGraph {
    fn dim(&self) -> usize {
        match *self {
            CatalogGraph::Zero { dim }
            | CatalogGraph::Bump { dim, .. }
            | CatalogGraph::ConeSmoothed { dim, .. } => dim,
        }
    }

    fn smoothness(&self) -> usize {
        match self {
            CatalogGraph::Zero { .. } => SMOOTH,
            _ => 1,
        }
    }

    fn holder(&self) -> f64 {
        match *self {
            CatalogGraph::Zero { .. } | CatalogGraph::Bump { .. } => 1.0,
            CatalogGraph::ConeSmoothed { lambda, .. } => lambda,
        }
    }

    fn support_radius(&self) -> f64 {
        match *self {
            CatalogGraph::Zero { .. } => 1.0,
            CatalogGraph::Bump { radius, .. } | CatalogGraph::ConeSmoothed { radius, .. } => {
                radius
            }
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self.profile() {
            None => 0.0,
            Some(p) => p.deriv(0, norm(x)),
        }
    }

    fn deriv(&self, alpha: &[usize], x: &[f64]) -> f64 {
        debug_assert_eq!(alpha.len(), x.len());
        let Some(p) = self.profile() else {
            return 0.0;
        };
        let order: usize = alpha.iter().sum();
        if order == 0 {
            return p.deriv(0, norm(x));
        }
        if x.len() == 1 {
            // h(x) = H(|x|): each derivative picks up sign(x).
            let t = x[0];
            let sign = if t < 0.0 && order % 2 == 1 { -1.0 } else { 1.0 };
            return sign * p.deriv(order, t.abs());
        }
        let r = norm(x);
        match order {
            1 => {
                let i = alpha.iter().position(|&a| a == 1).unwrap();
                if r == 0.0 {
                    0.0
                } else {
                    p.deriv(1, r) * x[i] / r
                }
            }
            2 => {
                let idx: Vec<usize> = alpha
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &a)| std::iter::repeat_n(i, a))
                    .collect();
                let (i, j) = (idx[0], idx[1]);
                let delta = if i == j { 1.0 } else { 0.0 };
                if r == 0.0 {
                    return p.deriv(2, 0.0) * delta;
                }
                let h1 = p.deriv(1, r);
                let h2 = p.deriv(2, r);
                let ninj = x[i] * x[j] / (r * r);
                h2 * ninj + h1 / r * (delta - ninj)
            }
            _ => f64::NAN,
        }
    }

    fn max_deriv_order(&self) -> usize {
        match self {
            CatalogGraph::Zero { .. } => SMOOTH,
            _ if self.dim() == 2 => 4,
            _ => 2,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match *self {
            CatalogGraph::Zero { .. } => Vec::new(),
            CatalogGraph::Bump { radius, .. } => vec![radius],
            CatalogGraph::ConeSmoothed { lambda, radius, .. } => {
                if lambda < 1.0 {
                    vec![0.0, radius]
                } else {
                    vec![radius]
                }
            }
        }
    }

    fn label(&self) -> String {
        match *self {
            CatalogGraph::Zero { .. } => "zero".to_string(),
            CatalogGraph::Bump { eps, radius, .. } => format!("bump({eps}, {radius})"),
            CatalogGraph::ConeSmoothed {
                eps, lambda, radius, ..
            } => format!("cone_smoothed({eps}, {lambda}, {radius})"),
        }
    }
}
