//! The Riesz transform `∇(−Δ_Dir)^{−1/2}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{
    estimate_norm, BoundaryCondition, DiscreteOperator, LinearMap, NormEstimate, NormOptions,
    OperatorLabel,
};
use crate::operators::{normal_gradient, CsrMatrix};
use crate::spaces::{partial_with, GridFunction, HalfSpaceGrid, NormSpec, NormalStencils, SobolevNorm};

use super::fractional::FractionalPowers;

/// `v ↦ (∂₁, ∂₂) A^{−1/2} v`, components stacked.
///
/// `∂₁` uses the zero boundary value; `∂₂` is spectral.
pub struct RieszMap<'a> {
    grid: &'a HalfSpaceGrid,
    stencils: NormalStencils,
    d1: CsrMatrix,
    powers: FractionalPowers,
}

impl<'a> RieszMap<'a> {
    /// `a_dir` must be the unshifted Dirichlet Laplacian; `A = −a_dir`.
    pub fn new(a_dir: &'a DiscreteOperator) -> Result<Self> {
        if a_dir.bc() != BoundaryCondition::Dirichlet
            || a_dir.label() != OperatorLabel::Laplacian
            || a_dir.shift().is_some()
        {
            return Err(Error::invalid("a_dir", "expected the unshifted Dirichlet Laplacian"));
        }
        let a = a_dir.shifted(0.0)?;
        Ok(RieszMap {
            grid: a_dir.grid(),
            stencils: NormalStencils::new(a_dir.grid().normal_nodes()),
            d1: normal_gradient(a_dir.grid(), BoundaryCondition::Dirichlet),
            powers: FractionalPowers::new(&a)?,
        })
    }

    fn components(&self) -> usize {
        self.grid.dim()
    }
}

impl LinearMap for RieszMap<'_> {
    fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let s = self.powers.inverse_apply(0.5, x)?;
        let mut out = self.d1.matvec(&s);
        if self.components() == 2 {
            out.extend(partial_with(self.grid, &self.stencils, &s, 0, 1));
        }
        Ok(out)
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.grid.len();
        let mut g = self.d1.matvec_adjoint(&y[..n]);
        if self.components() == 2 {
            // the spectral lateral derivative is real and skew
            let lat = partial_with(self.grid, &self.stencils, &y[n..2 * n], 0, 1);
            for (a, b) in g.iter_mut().zip(lat) {
                *a -= b;
            }
        }
        self.powers.inverse_apply_adjoint(0.5, &g)
    }
}

/// Estimated `‖∇(−Δ_Dir)^{−1/2}‖` on `W^{k,p}(w_γ)`.
pub fn riesz_transform_norm(
    a_dir: &DiscreteOperator,
    spec: NormSpec,
    opts: &NormOptions,
) -> Result<NormEstimate> {
    let map = RieszMap::new(a_dir)?;
    estimate_norm(&map, a_dir.grid(), spec, opts)
}

/// `‖∇(−Δ_Dir)^{−1/2} f‖ / ‖f‖` for one function; 0 when `f = 0`.
pub fn riesz_transform_ratio(a_dir: &DiscreteOperator, f: &GridFunction, spec: NormSpec) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let map = RieszMap::new(a_dir)?;
    let grid = a_dir.grid();
    let sob = SobolevNorm::new(grid, spec)?;
    let out = map.apply(f.values())?;
    let num: f64 = out
        .chunks(grid.len())
        .map(|c| sob.eval_values(grid, c).powf(spec.p))
        .sum::<f64>()
        .powf(1.0 / spec.p);
    Ok(num / sob.eval(f))
}
