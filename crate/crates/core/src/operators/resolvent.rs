//! Factored resolvents `(λ − A)⁻¹`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spaces::GridFunction;

use super::assemble::DiscreteOperator;
use super::banded::BandedLu;

/// Relative residual accepted by [`resolvent_solve`].
pub const RESIDUAL_TOL: f64 = 1e-9;

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A factorization of `λ − A`, shareable across threads.
#[derive(Debug, Clone)]
pub struct Resolvent {
    lambda: Complex64,
    shifted: super::sparse::CsrMatrix,
    lu: Arc<BandedLu>,
}

impl Resolvent {
    pub fn new(a: &DiscreteOperator, lambda: Complex64) -> Result<Self> {
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::invalid("lambda", "must be finite"));
        }
        let shifted = a.matrix().shifted_negation(lambda);
        let lu = BandedLu::factor(&shifted).ok_or(Error::NearSpectrum { z: lambda })?;
        Ok(Resolvent {
            lambda,
            shifted,
            lu: Arc::new(lu),
        })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// `u = (λ − A)⁻¹ f`, with the residual checked.
    pub fn solve(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        let u = self.lu.solve(f);
        let r: Vec<Complex64> = self
            .shifted
            .matvec(&u)
            .iter()
            .zip(f)
            .map(|(a, b)| a - b)
            .collect();
        let (res, scale) = (l2(&r), l2(f));
        if !(res <= RESIDUAL_TOL * scale) && scale > 0.0 {
            return Err(Error::NearSpectrum { z: self.lambda });
        }
        Ok(u)
    }

    /// `(λ − A)⁻ᴴ f` without the residual check.
    pub fn solve_adjoint(&self, f: &[Complex64]) -> Vec<Complex64> {
        self.lu.solve_adjoint(f)
    }

    /// `(λ − A)⁻¹ f` without the residual check.
    pub fn solve_unchecked(&self, f: &[Complex64]) -> Vec<Complex64> {
        self.lu.solve(f)
    }
}

/// Solves `(λ − A) u = f`.
pub fn resolvent_solve(
    a: &DiscreteOperator,
    lambda: Complex64,
    f: &GridFunction,
) -> Result<GridFunction> {
    if f.grid().len() != a.grid().len() {
        return Err(Error::invalid("f", "grid function lives on a different grid"));
    }
    if f.is_zero() {
        return Ok(GridFunction::zeros(Arc::clone(f.grid())));
    }
    let u = Resolvent::new(a, lambda)?.solve(f.values())?;
    GridFunction::new(Arc::clone(f.grid()), u)
}
