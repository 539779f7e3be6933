//! Empirical H∞-calculus constants.

use std::io::Write;

use num_complex::Complex64;

use crate::error::Result;
use crate::operators::DiscreteOperator;
use crate::spaces::{NormSpec, SobolevNorm};

use super::contour::{apply_functions, ContourSpec};
use super::functions::SectorFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct HinftyRow {
    pub function_label: String,
    pub probe_id: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HinftyReport {
    pub spec: NormSpec,
    /// `max ‖f(A)v‖ / (‖f‖_∞ ‖v‖)`
    pub constant: f64,
    pub rows: Vec<HinftyRow>,
    /// `(label, reason)` of members left out
    pub skipped: Vec<(String, String)>,
}

impl HinftyReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["function_label", "probe_id", "ratio"])?;
        for r in &self.rows {
            out.write_record([
                r.function_label.clone(),
                r.probe_id.to_string(),
                format!("{:.12e}", r.ratio),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Estimates the calculus constant of `a` in each norm of `specs` from one contour pass.
pub fn hinfty_bound_estimates(
    a: &DiscreteOperator,
    family: &[SectorFunction],
    contour: &ContourSpec,
    probes: &[Vec<Complex64>],
    specs: &[NormSpec],
) -> Result<Vec<HinftyReport>> {
    contour.validate()?;
    let mut skipped = Vec::new();
    let mut used = Vec::new();
    for f in family {
        if !(contour.nu < f.omega()) {
            skipped.push((f.label().to_string(), "contour outside the sector".to_string()));
        } else {
            used.push(f.clone());
        }
    }
    let images = apply_functions(a, &used, contour, probes)?;
    let grid = a.grid();
    specs
        .iter()
        .map(|&spec| {
            let sob = SobolevNorm::new(grid, spec)?;
            let probe_norms: Vec<f64> = probes.iter().map(|v| sob.eval_values(grid, v)).collect();
            let mut rows = Vec::new();
            let mut constant = 0.0f64;
            for (f, per_v) in used.iter().zip(&images) {
                for (pid, (img, &nv)) in per_v.iter().zip(&probe_norms).enumerate() {
                    let denom = f.hinf_norm() * nv;
                    let ratio = if denom > 0.0 {
                        sob.eval_values(grid, img) / denom
                    } else {
                        0.0
                    };
                    constant = constant.max(ratio);
                    rows.push(HinftyRow {
                        function_label: f.label().to_string(),
                        probe_id: pid,
                        ratio,
                    });
                }
            }
            Ok(HinftyReport {
                spec,
                constant,
                rows,
                skipped: skipped.clone(),
            })
        })
        .collect()
}

/// Estimates the calculus constant of `a` in the norm of `spec`.
pub fn hinfty_bound_estimate(
    a: &DiscreteOperator,
    family: &[SectorFunction],
    contour: &ContourSpec,
    probes: &[Vec<Complex64>],
    spec: NormSpec,
) -> Result<HinftyReport> {
    Ok(hinfty_bound_estimates(a, family, contour, probes, &[spec])?
        .pop()
        .unwrap())
}
