//! Fractional powers from the resolvent integral
//! `A^{−α} = (sin πα/π) ∫₀^∞ t^{−α}(t + A)⁻¹ dt`.
//!
//! With `t = e^s` the integral is a trapezoid sum over `s ∈ [−S, S]`; outside
//! that window the lattice sum continues with `(t + A)⁻¹ ≈ A⁻¹ − tA⁻²` (small `t`)
//! or `t⁻¹ − At⁻² + A²t⁻³` (large `t`), whose geometric series are summed exactly.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::{BandedLu, CsrMatrix, DiscreteOperator};
use crate::spaces::GridFunction;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
/// Largest number of stored band entries before factors are recomputed per call.
const CACHE_LIMIT: usize = 1 << 25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOptions {
    /// half-width `S` of the window in `s = ln t`
    pub s_max: f64,
    pub step: f64,
}

impl Default for FractionalOptions {
    fn default() -> Self {
        FractionalOptions {
            s_max: 30.0,
            step: 0.25,
        }
    }
}

/// `a/(1 − a)` for `a = e^{−c}`: `Σ_{m≥1} e^{−cm}`.
fn geometric(c: f64) -> f64 {
    let q = (-c).exp();
    q / (1.0 - q)
}

/// Applies `A^{±α}` for a positive operator `A`, caching the shifted factorizations.
#[derive(Debug, Clone)]
pub struct FractionalPowers {
    matrix: CsrMatrix,
    opts: FractionalOptions,
    nodes: Vec<f64>,
    cache: Option<Arc<Vec<BandedLu>>>,
    inverse: Arc<BandedLu>,
}

impl FractionalPowers {
    pub fn new(a: &DiscreteOperator) -> Result<Self> {
        Self::with_options(a, FractionalOptions::default())
    }

    pub fn with_options(a: &DiscreteOperator, opts: FractionalOptions) -> Result<Self> {
        if !(opts.s_max > 0.0 && opts.step > 0.0) {
            return Err(Error::invalid("step", "window and step must be positive"));
        }
        let m = (opts.s_max / opts.step).round() as i64;
        let nodes: Vec<f64> = (-m..=m).map(|j| j as f64 * opts.step).collect();
        let matrix = a.matrix().clone();
        let inverse = BandedLu::factor(&matrix).ok_or(Error::NearSpectrum { z: ZERO })?;
        let (kl, ku) = matrix.bandwidths();
        let stored = matrix.dim() * (2 * kl + ku + 1) * nodes.len();
        let mut fp = FractionalPowers {
            matrix,
            opts,
            nodes,
            cache: None,
            inverse: Arc::new(inverse),
        };
        if stored <= CACHE_LIMIT {
            let lus: Result<Vec<BandedLu>> = fp.nodes.par_iter().map(|&s| fp.factor(s)).collect();
            fp.cache = Some(Arc::new(lus?));
        }
        Ok(fp)
    }

    fn factor(&self, s: f64) -> Result<BandedLu> {
        let t = Complex64::new(s.exp(), 0.0);
        let id = CsrMatrix::identity(self.dim());
        let m = self.matrix.combine(Complex64::new(1.0, 0.0), &id, t);
        BandedLu::factor(&m).ok_or(Error::NearSpectrum { z: -t })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn check_alpha(alpha: f64) -> Result<()> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid("alpha", "exponent must lie in (0, 1)"));
        }
        Ok(())
    }

    fn sum(&self, alpha: f64, v: &[Complex64], adjoint: bool) -> Result<Vec<Complex64>> {
        Self::check_alpha(alpha)?;
        if v.len() != self.dim() {
            return Err(Error::invalid("v", "vector length differs from the operator"));
        }
        let h = self.opts.step;
        let solve = |lu: &BandedLu| {
            if adjoint {
                lu.solve_adjoint(v)
            } else {
                lu.solve(v)
            }
        };
        let parts: Result<Vec<Vec<Complex64>>> = match &self.cache {
            Some(c) => Ok(c.par_iter().map(solve).collect()),
            None => self
                .nodes
                .par_iter()
                .map(|&s| self.factor(s).map(|lu| solve(&lu)))
                .collect(),
        };
        let n = self.dim();
        let mut acc = vec![ZERO; n];
        for (&s, part) in self.nodes.iter().zip(parts?) {
            let w = h * ((1.0 - alpha) * s).exp();
            for k in 0..n {
                acc[k] += part[k] * w;
            }
        }
        // lattice points below the window: t^{1−α}A⁻¹ − t^{2−α}A⁻²
        let s0 = self.nodes[0];
        let s1 = self.nodes[self.nodes.len() - 1];
        let low1 = h * ((1.0 - alpha) * s0).exp() * geometric((1.0 - alpha) * h);
        let low2 = h * ((2.0 - alpha) * s0).exp() * geometric((2.0 - alpha) * h);
        let inv = |x: &[Complex64]| {
            if adjoint {
                self.inverse.solve_adjoint(x)
            } else {
                self.inverse.solve(x)
            }
        };
        let mul = |x: &[Complex64]| {
            if adjoint {
                self.matrix.matvec_adjoint(x)
            } else {
                self.matrix.matvec(x)
            }
        };
        let iv = inv(v);
        let iiv = inv(&iv);
        // above the window: t^{−α} − t^{−α−1}A + t^{−α−2}A²
        let up0 = h * (-alpha * s1).exp() * geometric(alpha * h);
        let up1 = h * (-(alpha + 1.0) * s1).exp() * geometric((alpha + 1.0) * h);
        let up2 = h * (-(alpha + 2.0) * s1).exp() * geometric((alpha + 2.0) * h);
        let av = mul(v);
        let aav = mul(&av);
        let c = (PI * alpha).sin() / PI;
        for k in 0..n {
            acc[k] += iv[k] * low1 - iiv[k] * low2 + v[k] * up0 - av[k] * up1 + aav[k] * up2;
            acc[k] *= c;
        }
        Ok(acc)
    }

    /// `A^{−α} v`.
    pub fn inverse_apply(&self, alpha: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.sum(alpha, v, false)
    }

    /// `(A^{−α})ᴴ v` in the plain Euclidean inner product.
    pub fn inverse_apply_adjoint(&self, alpha: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.sum(alpha, v, true)
    }

    /// `A^{α} v = A·A^{−(1−α)} v`.
    pub fn apply(&self, alpha: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        Self::check_alpha(alpha)?;
        Ok(self.matrix.matvec(&self.sum(1.0 - alpha, v, false)?))
    }
}

/// `A^{−α} v`.
pub fn fractional_power_inverse_apply(
    a: &DiscreteOperator,
    alpha: f64,
    v: &GridFunction,
) -> Result<GridFunction> {
    let fp = FractionalPowers::new(a)?;
    GridFunction::new(Arc::clone(v.grid()), fp.inverse_apply(alpha, v.values())?)
}

/// `A^{α} v`.
pub fn fractional_power_apply(a: &DiscreteOperator, alpha: f64, v: &GridFunction) -> Result<GridFunction> {
    let fp = FractionalPowers::new(a)?;
    GridFunction::new(Arc::clone(v.grid()), fp.apply(alpha, v.values())?)
}
