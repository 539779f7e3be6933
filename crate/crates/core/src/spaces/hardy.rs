//! Weighted Hardy inequality on the half-line.

use crate::error::{Error, Result};

use super::diff::partial;
use super::function::GridFunction;
use super::norms::{lp_norm, weight_vector, lp_of_values};
use super::trace::trace_eval;

/// Which admissible regime the check ran in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardyCase {
    /// `γ < p − 1` with vanishing trace.
    VanishingTrace,
    /// `γ > p − 1`.
    LargeWeight,
}

impl HardyCase {
    pub fn label(&self) -> &'static str {
        match self {
            HardyCase::VanishingTrace => "i",
            HardyCase::LargeWeight => "ii",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyReport {
    /// `‖u‖_{L^p(w_{γ−p})}`.
    pub lhs: f64,
    /// `‖u'‖_{L^p(w_γ)}`.
    pub rhs: f64,
    /// `lhs / rhs`, 0 when both vanish.
    pub ratio: f64,
    pub case: HardyCase,
}

/// Classical sharp constant `p / |p − 1 − γ|`.
pub fn hardy_constant(p: f64, gamma: f64) -> f64 {
    p / (p - 1.0 - gamma).abs()
}

/// Compare `‖u‖_{L^p(w_{γ−p})}` with `‖u'‖_{L^p(w_γ)}` for a one-dimensional `u`.
///
/// `require_trace_zero` selects the vanishing-trace regime; it must agree with
/// the sign of `γ − (p − 1)`.
pub fn hardy_check(u: &GridFunction, p: f64, gamma: f64, require_trace_zero: bool) -> Result<HardyReport> {
    if u.grid().dim() != 1 {
        return Err(Error::invalid("u", "Hardy check is one-dimensional"));
    }
    if !(p > 1.0) {
        return Err(Error::invalid("p", "must exceed 1"));
    }
    let crit = p - 1.0;
    if (gamma - crit).abs() < 1e-12 {
        return Err(Error::invalid("gamma", "γ = p−1 excluded"));
    }
    let case = if gamma < crit {
        HardyCase::VanishingTrace
    } else {
        HardyCase::LargeWeight
    };
    if require_trace_zero != (case == HardyCase::VanishingTrace) {
        return Err(Error::invalid(
            "bc_flag",
            "trace condition applies exactly when γ < p−1",
        ));
    }
    if case == HardyCase::VanishingTrace {
        let tr = trace_eval(u)?[0].norm();
        let scale = lp_norm(u, p, gamma)?;
        if tr > 1e-6 * scale.max(f64::MIN_POSITIVE) && tr > 0.0 {
            return Err(Error::invalid(
                "u",
                format!("trace {tr:.3e} does not vanish (case γ < p−1)"),
            ));
        }
    }
    let lhs = lp_norm(u, p, gamma - p)?;
    let du = partial(u, 1, 0);
    let rhs = lp_of_values(&du, &weight_vector(u.grid(), gamma), p);
    let ratio = if lhs == 0.0 && rhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(HardyReport {
        lhs,
        rhs,
        ratio,
        case,
    })
}
