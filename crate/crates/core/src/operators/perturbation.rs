//! Relative bounds and elliptic regularity ratios.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spaces::{normal_trace_eval, trace_eval, GridFunction, NormSpec, SobolevNorm};

use super::assemble::{BoundaryCondition, DiscreteOperator};
use super::resolvent::resolvent_solve;

/// Largest trace (relative to `max|u|`) accepted for a Dirichlet trial.
pub const DIRICHLET_TRACE_TOL: f64 = 1e-4;
/// Largest normal trace (relative to `max|u|`) accepted for a Neumann trial.
pub const NEUMANN_TRACE_TOL: f64 = 1e-3;

/// Checks that `u` satisfies `bc` at `x₁ = 0` up to the trace tolerances.
pub fn check_boundary_condition(u: &GridFunction, bc: BoundaryCondition) -> Result<()> {
    let scale = u.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(());
    }
    let (tr, tol) = match bc {
        BoundaryCondition::Dirichlet => (trace_eval(u)?, DIRICHLET_TRACE_TOL),
        BoundaryCondition::Neumann => (normal_trace_eval(u)?, NEUMANN_TRACE_TOL),
    };
    let worst = tr.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale;
    if worst > tol {
        return Err(Error::invalid(
            "trials",
            format!("{} trace {worst:e} exceeds tolerance {tol:e}", bc.name()),
        ));
    }
    Ok(())
}

/// `max_u ‖Bu‖ / ‖Au‖` over the trials, in the norm of `spec`.
pub fn perturbation_ratio(
    b: &DiscreteOperator,
    a: &DiscreteOperator,
    trials: &[GridFunction],
    spec: NormSpec,
) -> Result<f64> {
    if trials.is_empty() {
        return Err(Error::invalid("trials", "need at least one trial function"));
    }
    if b.grid().len() != a.grid().len() {
        return Err(Error::invalid("b", "operators live on different grids"));
    }
    let sob = SobolevNorm::new(a.grid(), spec)?;
    let mut eta = 0.0f64;
    for u in trials {
        check_boundary_condition(u, a.bc())?;
        if u.is_zero() {
            continue;
        }
        let au = sob.eval_values(a.grid(), &a.apply_values(u.values()));
        let bu = sob.eval_values(a.grid(), &b.apply_values(u.values()));
        if !(au > 0.0) {
            return Err(Error::invalid("trials", "trial lies in the kernel of A"));
        }
        eta = eta.max(bu / au);
    }
    Ok(eta)
}

/// `‖u‖_{W^{k+2,p}(w_γ)} / ‖f‖_{W^{k,p}(w_γ)}` for `u = R(λ, A) f`; 0 when `f = 0`.
pub fn elliptic_regularity_ratio(
    a: &DiscreteOperator,
    lambda: Complex64,
    f: &GridFunction,
    spec: NormSpec,
) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let u = resolvent_solve(a, lambda, f)?;
    let hi = NormSpec::new(spec.k + 2, spec.p, spec.gamma)?;
    let nu = SobolevNorm::new(f.grid(), hi)?.eval(&u);
    let nf = SobolevNorm::new(f.grid(), spec)?.eval(f);
    Ok(nu / nf)
}
