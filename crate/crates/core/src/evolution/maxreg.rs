use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::DiscreteOperator;
use crate::spaces::{HalfSpaceGrid, NormSpec, SobolevNorm};

use super::heat::{heat_solve, positive_part, sample_forcing};
use super::time::TimeGrid;

/// `L^q(v; X)` norm of `g_1..g_N` with per-step weights.
fn temporal_norm(values: &[f64], weights: &[f64], q: f64) -> f64 {
    values
        .iter()
        .zip(weights)
        .map(|(x, w)| w * x.powf(q))
        .sum::<f64>()
        .powf(1.0 / q)
}

/// `(‖∂ₜu‖ + ‖Au‖) / ‖f‖` in `L^q(v; W^{k,p}(w_γ))` for the backward Euler solution;
/// 0 when `f = 0`.
///
/// `∂ₜu` is the difference quotient `(u_n − u_{n−1})/τ_n`; all three fields
/// are taken at `t_n` and weighted per step.
pub fn max_reg_ratio(
    a: &DiscreteOperator,
    f: &[Vec<Complex64>],
    tg: &TimeGrid,
    spec: NormSpec,
) -> Result<f64> {
    let grid = a.grid();
    let sob = SobolevNorm::new(grid, spec)?;
    let fq: Vec<f64> = f.iter().map(|v| sob.eval_values(grid, v)).collect();
    if fq.iter().all(|&x| x == 0.0) {
        if f.len() != tg.steps() {
            return Err(Error::invalid("f", format!("expected {} samples, got {}", tg.steps(), f.len())));
        }
        return Ok(0.0);
    }
    let tr = heat_solve(a, f, tg)?;
    let b = positive_part(a);
    let mut dt = Vec::with_capacity(tg.steps());
    let mut au = Vec::with_capacity(tg.steps());
    for n in 1..=tg.steps() {
        let tau = tg.step(n - 1);
        let d: Vec<Complex64> = tr.states[n]
            .iter()
            .zip(&tr.states[n - 1])
            .map(|(x, y)| (x - y) / tau)
            .collect();
        dt.push(sob.eval_values(grid, &d));
        au.push(sob.eval_values(grid, &b.matvec(&tr.states[n])));
    }
    let w = tg.temporal_weights();
    let q = tg.q();
    let num = temporal_norm(&dt, &w, q) + temporal_norm(&au, &w, q);
    Ok(num / temporal_norm(&fq, &w, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemporalProfile {
    Constant,
    /// `sin(πt/T)`
    Sine,
    /// `t/T`
    Ramp,
}

impl TemporalProfile {
    pub const ALL: [TemporalProfile; 3] = [Self::Constant, Self::Sine, Self::Ramp];

    pub fn name(self) -> &'static str {
        match self {
            Self::Constant => "const",
            Self::Sine => "sine",
            Self::Ramp => "ramp",
        }
    }

    pub fn eval(self, t: f64, t_final: f64) -> f64 {
        match self {
            Self::Constant => 1.0,
            Self::Sine => (PI * t / t_final).sin(),
            Self::Ramp => t / t_final,
        }
    }
}

/// A separable forcing `φ(t) g(x)` sampled on a time grid.
#[derive(Debug, Clone)]
pub struct CatalogForcing {
    pub label: String,
    pub samples: Vec<Vec<Complex64>>,
}

/// Separable forcings from two spatial profiles and the three temporal ones.
///
/// Spatial profiles are `x₁e^{−x₁}` and `e^{−(x₁−2)²}`, modulated laterally
/// by `1 + cos(2πx₂/Λ)/2` in two dimensions.
pub fn forcing_catalog(tg: &TimeGrid, grid: &HalfSpaceGrid) -> Vec<CatalogForcing> {
    let lambda = grid.lambda();
    let lateral = move |x: &[f64]| {
        if x.len() > 1 {
            1.0 + 0.5 * (2.0 * PI * x[1] / lambda).cos()
        } else {
            1.0
        }
    };
    let spatial: [(&str, fn(f64) -> f64); 2] = [
        ("wall", |s| s * (-s).exp()),
        ("bump", |s| (-(s - 2.0) * (s - 2.0)).exp()),
    ];
    let t_final = tg.t_final();
    let mut out = Vec::new();
    for (sname, g) in spatial {
        for prof in TemporalProfile::ALL {
            let samples = sample_forcing(tg, grid, |t, x| {
                Complex64::new(prof.eval(t, t_final) * g(x[0]) * lateral(x), 0.0)
            });
            out.push(CatalogForcing { label: format!("{sname}-{}", prof.name()), samples });
        }
    }
    out
}

/// One line of a ratio report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxRegRow {
    pub q: f64,
    pub a: f64,
    pub gamma: f64,
    pub k: usize,
    pub eps: f64,
    pub ratio: f64,
}

/// `q,a,gamma,k,eps,ratio`.
pub fn write_ratio_csv<W: Write>(rows: &[MaxRegRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["q", "a", "gamma", "k", "eps", "ratio"])?;
    for r in rows {
        out.write_record([
            format!("{}", r.q),
            format!("{}", r.a),
            format!("{}", r.gamma),
            r.k.to_string(),
            format!("{}", r.eps),
            format!("{:.12e}", r.ratio),
        ])?;
    }
    out.flush()?;
    Ok(())
}
