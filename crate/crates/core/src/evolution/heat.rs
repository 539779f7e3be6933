use std::collections::HashMap;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{BandedLu, CsrMatrix, DiscreteOperator};
use crate::spaces::HalfSpaceGrid;

use super::time::TimeGrid;

/// States `u_0 = 0, u_1, …, u_N` at the time grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
}

impl Trajectory {
    /// `t,node_id,re,im`, one row per node and time.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "node_id", "re", "im"])?;
        for (t, u) in self.times.iter().zip(&self.states) {
            for (i, z) in u.iter().enumerate() {
                out.write_record([
                    format!("{t:.12e}"),
                    i.to_string(),
                    format!("{:.12e}", z.re),
                    format!("{:.12e}", z.im),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// The nonnegative operator `B` of `∂ₜu + Bu = f`: `−a` for a plain
/// Laplacian-type operator, `a` itself once shifted to `μ − Δ`.
pub(crate) fn positive_part(a: &DiscreteOperator) -> CsrMatrix {
    let n = a.matrix().dim();
    match a.shift() {
        Some(_) => a.matrix().clone(),
        None => CsrMatrix::zeros(n).combine(Complex64::new(0.0, 0.0), a.matrix(), Complex64::new(-1.0, 0.0)),
    }
}

/// `f(t_n)` at `n = 1..N`.
pub fn sample_forcing(
    tg: &TimeGrid,
    grid: &HalfSpaceGrid,
    f: impl Fn(f64, &[f64]) -> Complex64,
) -> Vec<Vec<Complex64>> {
    let points: Vec<Vec<f64>> = (0..grid.len()).map(|k| grid.point(k)).collect();
    tg.nodes()[1..]
        .iter()
        .map(|&t| points.iter().map(|x| f(t, x)).collect())
        .collect()
}

/// Backward Euler `(I/τ_n + B) u_n = u_{n−1}/τ_n + f_n` from `u_0 = 0`.
pub fn heat_solve(a: &DiscreteOperator, f: &[Vec<Complex64>], tg: &TimeGrid) -> Result<Trajectory> {
    let n = a.grid().len();
    if f.len() != tg.steps() {
        return Err(Error::invalid("f", format!("expected {} samples, got {}", tg.steps(), f.len())));
    }
    if let Some(bad) = f.iter().find(|v| v.len() != n) {
        return Err(Error::invalid("f", format!("sample of length {} on a grid of {n}", bad.len())));
    }
    let b = positive_part(a);
    let identity = CsrMatrix::identity(n);
    // steps repeat on uniform and refined grids, so factorizations are shared
    let mut cache: HashMap<u64, BandedLu> = HashMap::new();
    let mut states = Vec::with_capacity(tg.steps() + 1);
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    states.push(u.clone());
    for (k, fk) in f.iter().enumerate() {
        let tau = tg.step(k);
        if !cache.contains_key(&tau.to_bits()) {
            let m = b.combine(Complex64::new(1.0, 0.0), &identity, Complex64::new(1.0 / tau, 0.0));
            let lu = BandedLu::factor(&m).ok_or_else(|| {
                Error::NoConvergence { iterations: k, residual: f64::INFINITY }
            })?;
            cache.insert(tau.to_bits(), lu);
        }
        let rhs: Vec<Complex64> = u.iter().zip(fk).map(|(uo, fv)| uo / tau + fv).collect();
        u = cache[&tau.to_bits()].solve(&rhs);
        states.push(u.clone());
    }
    Ok(Trajectory { times: tg.nodes().to_vec(), states })
}
