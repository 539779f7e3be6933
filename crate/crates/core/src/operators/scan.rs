//! Resolvent-norm scans over sectors.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spaces::NormSpec;

use super::assemble::DiscreteOperator;
use super::norm_est::{estimate_norm, LinearMap, NormOptions};
use super::resolvent::Resolvent;

/// `λ·R(λ, B)` as a linear map.
pub struct ScaledResolvent {
    res: Resolvent,
}

impl ScaledResolvent {
    pub fn new(b: &DiscreteOperator, lambda: Complex64) -> Result<Self> {
        Ok(ScaledResolvent {
            res: Resolvent::new(b, lambda)?,
        })
    }
}

impl LinearMap for ScaledResolvent {
    fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let l = self.res.lambda();
        Ok(self.res.solve(x)?.into_iter().map(|z| z * l).collect())
    }

    fn apply_adjoint(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let l = self.res.lambda().conj();
        Ok(self.res.solve_adjoint(x).into_iter().map(|z| z * l).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanFlag {
    Ok,
    NotConverged,
    Singular,
}

impl ScanFlag {
    pub fn name(self) -> &'static str {
        match self {
            ScanFlag::Ok => "ok",
            ScanFlag::NotConverged => "not_converged",
            ScanFlag::Singular => "singular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub theta: f64,
    pub r: f64,
    /// NaN for singular rows
    pub norm_estimate: f64,
    pub iterations: usize,
    pub flag: ScanFlag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    /// `(θ, sup_r ‖λR(λ)‖)` over the non-singular rows of each angle
    pub suprema: Vec<(f64, f64)>,
}

impl ScanTable {
    pub fn overall_supremum(&self) -> f64 {
        self.suprema.iter().map(|s| s.1).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["theta", "r", "norm_estimate", "iterations", "flag"])?;
        for row in &self.rows {
            out.write_record([
                format!("{:.12e}", row.theta),
                format!("{:.12e}", row.r),
                format!("{:.12e}", row.norm_estimate),
                row.iterations.to_string(),
                row.flag.name().to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `n` log-spaced values from `lo` to `hi`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Estimates `‖λ R(λ, μ − A)‖` at `λ = r e^{iθ}` for every angle and radius.
pub fn sectoriality_scan(
    a: &DiscreteOperator,
    mu: f64,
    angles: &[f64],
    radii: &[f64],
    spec: NormSpec,
    opts: &NormOptions,
) -> Result<ScanTable> {
    if !(mu > 0.0) {
        return Err(Error::invalid("mu", "shift must be positive"));
    }
    if angles.is_empty() || radii.is_empty() {
        return Err(Error::invalid("angles", "need at least one angle and one radius"));
    }
    for &t in angles {
        if !(t > 0.0 && t <= std::f64::consts::PI) {
            return Err(Error::invalid("angles", format!("{t} is outside (0, π]")));
        }
    }
    for &r in radii {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid("radii", "radii must be positive"));
        }
    }
    let b = a.shifted(mu)?;
    let points: Vec<(f64, f64)> = angles
        .iter()
        .flat_map(|&t| radii.iter().map(move |&r| (t, r)))
        .collect();
    let rows: Result<Vec<ScanRow>> = points
        .par_iter()
        .map(|&(theta, r)| {
            let lambda = Complex64::from_polar(r, theta);
            let map = match ScaledResolvent::new(&b, lambda) {
                Ok(m) => m,
                Err(Error::NearSpectrum { .. }) => return Ok(singular(theta, r)),
                Err(e) => return Err(e),
            };
            match estimate_norm(&map, b.grid(), spec, opts) {
                Ok(est) => Ok(ScanRow {
                    theta,
                    r,
                    norm_estimate: est.value,
                    iterations: est.iterations,
                    flag: if est.converged {
                        ScanFlag::Ok
                    } else {
                        ScanFlag::NotConverged
                    },
                }),
                Err(Error::NearSpectrum { .. }) => Ok(singular(theta, r)),
                Err(e) => Err(e),
            }
        })
        .collect();
    let rows = rows?;
    let suprema = angles
        .iter()
        .map(|&t| {
            let s = rows
                .iter()
                .filter(|row| row.theta == t && row.flag != ScanFlag::Singular)
                .map(|row| row.norm_estimate)
                .fold(0.0, f64::max);
            (t, s)
        })
        .collect();
    Ok(ScanTable { rows, suprema })
}

fn singular(theta: f64, r: f64) -> ScanRow {
    ScanRow {
        theta,
        r,
        norm_estimate: f64::NAN,
        iterations: 0,
        flag: ScanFlag::Singular,
    }
}
