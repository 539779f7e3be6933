//! Imaginary powers `A^{is}` through mollified contour functions.
//!
//! `f_ε(z) = z^{is+ε}(1+z)^{−2ε}` is evaluated at `ε, 2ε, 4ε` and extrapolated
//! to `ε = 0` with the weights `(8/3, −2, 1/3)`, which cancel the first- and
//! second-order terms in `ε`.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::DiscreteOperator;
use crate::spaces::{NormSpec, SobolevNorm};

use super::contour::{apply_functions, ContourSpec};
use super::functions::{mollified_imaginary_power, FAMILY_OMEGA};

/// Smallest mollification exponent of the extrapolation ladder.
pub const BIP_EPSILON: f64 = 2e-3;
/// Largest `|s|` accepted.
pub const BIP_MAX_S: f64 = 5.0;
const LADDER: [(f64, f64); 3] = [(1.0, 8.0 / 3.0), (2.0, -2.0), (4.0, 1.0 / 3.0)];

#[derive(Debug, Clone, PartialEq)]
pub struct BipSweep {
    /// `(s, max_v ‖A^{is}v‖/‖v‖)`
    pub points: Vec<(f64, f64)>,
}

impl BipSweep {
    /// Least-squares slope of `log ‖A^{is}‖` against `|s|`.
    pub fn log_slope(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self.points.iter().map(|&(s, n)| (s.abs(), n.ln())).collect();
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / m, sy / m);
        let (mut num, mut den) = (0.0, 0.0);
        for (x, y) in &pts {
            num += (x - mx) * (y - my);
            den += (x - mx) * (x - mx);
        }
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["s", "norm"])?;
        for (s, n) in &self.points {
            out.write_record([format!("{s:.12e}"), format!("{n:.12e}")])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Estimates `‖A^{is}‖` for each `s` from one contour pass over all probes.
pub fn bip_sweep(
    a: &DiscreteOperator,
    s_values: &[f64],
    contour: &ContourSpec,
    probes: &[Vec<Complex64>],
    spec: NormSpec,
) -> Result<BipSweep> {
    if probes.is_empty() {
        return Err(Error::invalid("probes", "need at least one probe"));
    }
    let mut fs = Vec::with_capacity(3 * s_values.len());
    for &s in s_values {
        if !(s.abs() <= BIP_MAX_S) {
            return Err(Error::invalid("s", format!("|s| = {} exceeds {BIP_MAX_S}", s.abs())));
        }
        for (m, _) in LADDER {
            fs.push(mollified_imaginary_power(s, m * BIP_EPSILON, FAMILY_OMEGA)?);
        }
    }
    let images = apply_functions(a, &fs, contour, probes)?;
    let grid = a.grid();
    let sob = SobolevNorm::new(grid, spec)?;
    let n = grid.len();
    let points = s_values
        .iter()
        .enumerate()
        .map(|(si, &s)| {
            let mut best = 0.0f64;
            for (vi, v) in probes.iter().enumerate() {
                let mut x = vec![Complex64::new(0.0, 0.0); n];
                for (li, &(_, w)) in LADDER.iter().enumerate() {
                    for (acc, y) in x.iter_mut().zip(&images[3 * si + li][vi]) {
                        *acc += y * w;
                    }
                }
                let nv = sob.eval_values(grid, v);
                if nv > 0.0 {
                    best = best.max(sob.eval_values(grid, &x) / nv);
                }
            }
            (s, best)
        })
        .collect();
    Ok(BipSweep { points })
}

/// `max_v ‖A^{is}v‖ / ‖v‖`.
pub fn imaginary_power_norm(
    a: &DiscreteOperator,
    s: f64,
    contour: &ContourSpec,
    probes: &[Vec<Complex64>],
    spec: NormSpec,
) -> Result<f64> {
    Ok(bip_sweep(a, &[s], contour, probes, spec)?.points[0].1)
}
