//! Experiment configuration files.
//!
//! Files are TOML: top-level `key = value` pairs followed by `[section]` tables.
//! Every field except `experiment` and, where a norm is used, `norm.gamma` has
//! a default; unknown keys are rejected.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::calculus::ContourSpec;
use crate::error::{Error, Result};
use crate::spaces::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    GeometryCheck,
    Hardy,
    ResolventScan,
    CalculusBound,
    BipSweep,
    Riesz,
    HeatMr,
    PerturbationCurve,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        Self::GeometryCheck,
        Self::Hardy,
        Self::ResolventScan,
        Self::CalculusBound,
        Self::BipSweep,
        Self::Riesz,
        Self::HeatMr,
        Self::PerturbationCurve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::GeometryCheck => "geometry-check",
            Self::Hardy => "hardy",
            Self::ResolventScan => "resolvent-scan",
            Self::CalculusBound => "calculus-bound",
            Self::BipSweep => "bip-sweep",
            Self::Riesz => "riesz",
            Self::HeatMr => "heat-mr",
            Self::PerturbationCurve => "perturbation-curve",
        }
    }

    /// Config fields without defaults that the experiment reads.
    pub fn required_fields(self) -> &'static [&'static str] {
        match self {
            Self::GeometryCheck => &["experiment"],
            _ => &["experiment", "norm.gamma"],
        }
    }

    /// The estimate or property the experiment probes.
    pub fn anchor(self) -> &'static str {
        match self {
            Self::GeometryCheck => "regularized distance: fixed point, distance equivalence, derivative blow-up",
            Self::Hardy => "weighted Hardy inequality on the half-line",
            Self::ResolventScan => "sectoriality of mu - Laplacian on the flattened domain",
            Self::CalculusBound => "bounded H-infinity calculus of angle zero",
            Self::BipSweep => "bounded imaginary powers from the calculus",
            Self::Riesz => "Riesz transform of the Dirichlet Laplacian",
            Self::HeatMr => "maximal L^q(v)-regularity of the heat equation",
            Self::PerturbationCurve => "pullback perturbation bounded by the boundary seminorm",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid("experiment", format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// `μ` in `μ − Δ^Ψ`.
    #[serde(default = "default_shift")]
    pub shift: f64,
    /// `dirichlet` or `neumann`.
    #[serde(default = "default_bc")]
    pub bc: String,
    #[serde(default)]
    pub boundary: BoundarySection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormSection>,
    #[serde(default)]
    pub contour: ContourSection,
    #[serde(default)]
    pub time: TimeSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub scan: ScanSection,
    #[serde(default)]
    pub probes: ProbeSection,
}

fn default_shift() -> f64 {
    1.0
}

fn default_bc() -> String {
    "dirichlet".into()
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }
}

/// A catalog graph: `zero`, `bump` (`C^{1,1}`) or `cone` (`C^{1,λ}`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    #[serde(default = "default_boundary")]
    pub name: String,
    #[serde(default)]
    pub eps: f64,
    #[serde(default = "one")]
    pub radius: f64,
    /// Hölder exponent of `cone`.
    #[serde(default = "half")]
    pub lambda: f64,
    /// Fixed Lipschitz scale `L` of the mollified graph; automatic when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz_scale: Option<f64>,
}

fn default_boundary() -> String {
    "zero".into()
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

impl Default for BoundarySection {
    fn default() -> Self {
        BoundarySection {
            name: default_boundary(),
            eps: 0.0,
            radius: 1.0,
            lambda: 0.5,
            lipschitz_scale: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub dim: usize,
    pub x_max: f64,
    pub lambda: f64,
    pub n1: usize,
    pub n2: usize,
    pub grading: f64,
    pub x1_min: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        let g = GridSpec::default();
        GridSection {
            dim: g.dim,
            x_max: g.x_max,
            lambda: g.lambda,
            n1: g.n1,
            n2: g.n2,
            grading: g.grading,
            x1_min: g.x1_min,
        }
    }
}

impl GridSection {
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            dim: self.dim,
            x_max: self.x_max,
            lambda: self.lambda,
            n1: self.n1,
            n2: self.n2,
            grading: self.grading,
            x1_min: self.x1_min,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSection {
    #[serde(default)]
    pub k: usize,
    #[serde(default = "two")]
    pub p: f64,
    pub gamma: f64,
}

fn two() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContourSection {
    pub nu: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub nodes_per_decade: usize,
}

impl Default for ContourSection {
    fn default() -> Self {
        let c = ContourSpec::default();
        ContourSection {
            nu: c.nu,
            r_min: c.r_min,
            r_max: c.r_max,
            nodes_per_decade: c.nodes_per_decade,
        }
    }
}

impl ContourSection {
    pub fn spec(&self) -> ContourSpec {
        ContourSpec {
            nu: self.nu,
            r_min: self.r_min,
            r_max: self.r_max,
            nodes_per_decade: self.nodes_per_decade,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSection {
    pub t_final: f64,
    pub steps: usize,
    pub q: f64,
    /// Exponent of the temporal weight `t^a`.
    pub a: f64,
    /// Step growth ratio away from `t = 0`; 1 is uniform.
    pub grading: f64,
}

impl Default for TimeSection {
    fn default() -> Self {
        TimeSection {
            t_final: 1.0,
            steps: 32,
            q: 2.0,
            a: 0.0,
            grading: 1.0,
        }
    }
}

/// Lists that replace the single values of the other sections; empty means unswept.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub eps: Vec<f64>,
    pub gamma: Vec<f64>,
    pub k: Vec<usize>,
    /// Temporal weight exponents.
    pub a: Vec<f64>,
    /// Imaginary-power orders.
    pub s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    pub angles: Vec<f64>,
    pub radii: usize,
    pub r_min: f64,
    pub r_max: f64,
}

impl Default for ScanSection {
    fn default() -> Self {
        ScanSection {
            angles: vec![PI / 2.0, 3.0 * PI / 4.0, PI - 0.1],
            radii: 12,
            r_min: 1e-2,
            r_max: 1e4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSection {
    /// Probe vectors for calculus and imaginary-power estimates.
    pub count: usize,
    /// Trial functions for perturbation ratios.
    pub trials: usize,
    /// Sample points for geometry checks.
    pub samples: usize,
    pub power_iterations: usize,
    pub norm_probes: usize,
}

impl Default for ProbeSection {
    fn default() -> Self {
        ProbeSection {
            count: 16,
            trials: 16,
            samples: 1000,
            power_iterations: 20,
            norm_probes: 64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = ExperimentConfig::from_toml("experiment = \"hardy\"\n[norm]\ngamma = 0.5\n").unwrap();
        assert_eq!(c.experiment, ExperimentKind::Hardy);
        assert_eq!(c.grid.n1, 256);
        assert_eq!(c.norm.unwrap().p, 2.0);
        let back = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn missing_gamma_is_named() {
        let e = ExperimentConfig::from_toml("experiment = \"riesz\"\n[norm]\nk = 0\n").unwrap_err();
        assert!(e.to_string().contains("gamma"), "{e}");
        assert!(e.is_validation());
    }

    #[test]
    fn unknown_experiment_is_rejected() {
        let e = ExperimentConfig::from_toml("experiment = \"nope\"\n").unwrap_err();
        assert!(e.is_validation());
        assert!("nope".parse::<ExperimentKind>().is_err());
    }
}
