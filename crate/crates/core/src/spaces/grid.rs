//! Graded tensor grids on the truncated half-space `(0, X] × [-Λ, Λ)^{d-1}`.

use crate::error::{Error, Result};

/// Parameters of a [`HalfSpaceGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Grid dimension, 1 or 2.
    pub dim: usize,
    pub x_max: f64,
    /// Lateral half-period `Λ` (ignored for `dim = 1`).
    pub lambda: f64,
    /// Normal cells.
    pub n1: usize,
    /// Lateral nodes (ignored for `dim = 1`).
    pub n2: usize,
    /// Width ratio of neighbouring cells in the geometric zone, in `(0.5, 1)`.
    pub grading: f64,
    /// First normal node.
    pub x1_min: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            dim: 1,
            x_max: 40.0,
            lambda: 2.0,
            n1: 256,
            n2: 32,
            grading: 0.85,
            x1_min: 1e-3,
        }
    }
}

/// Normal coordinate map `s(x) = ln(1 + x/b)/κ + x/H`; cells are unit intervals in `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Grading {
    kappa: f64,
    b: f64,
    inv_h: f64,
    /// cells per unit of `s`
    density: f64,
}

impl Grading {
    fn s(&self, x: f64) -> f64 {
        ((x / self.b).ln_1p() / self.kappa + x * self.inv_h) * self.density
    }

    fn ds(&self, x: f64) -> f64 {
        (1.0 / (self.kappa * (self.b + x)) + self.inv_h) * self.density
    }

    fn inverse(&self, target: f64, x_hi: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, x_hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.s(mid) > target {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        let x = 0.5 * (lo + hi);
        x - (self.s(x) - target) / self.ds(x)
    }
}

/// A graded half-space grid with midpoint-rule cell weights.
///
/// Normal nodes are cell midpoints, so no node lies on `x₁ = 0`; lateral nodes
/// are uniform and periodic. Node `(i, j)` has flat index `i·n2 + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpaceGrid {
    spec: GridSpec,
    grading: Grading,
    edges: Vec<f64>,
    normal: Vec<f64>,
    widths: Vec<f64>,
    lateral: Vec<f64>,
    dx2: f64,
}

impl HalfSpaceGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        if spec.dim != 1 && spec.dim != 2 {
            return Err(Error::invalid("dim", "grid dimension must be 1 or 2"));
        }
        if spec.n1 < 16 {
            return Err(Error::invalid("n1", "at least 16 normal nodes required"));
        }
        if spec.dim == 2 && spec.n2 < 16 {
            return Err(Error::invalid("n2", "at least 16 lateral nodes required"));
        }
        if !(spec.x_max > 0.0) || !spec.x_max.is_finite() {
            return Err(Error::invalid("x_max", "must be positive"));
        }
        if spec.dim == 2 && !(spec.lambda > 0.0) {
            return Err(Error::invalid("lambda", "lateral half-period must be positive"));
        }
        if !(spec.grading > 0.5 && spec.grading < 1.0) {
            return Err(Error::invalid("grading", "ratio must lie in (0.5, 1)"));
        }
        if !(spec.x1_min > 0.0 && 2.0 * spec.x1_min * (spec.n1 as f64) < spec.x_max) {
            return Err(Error::invalid(
                "x1_min",
                "need 0 < x1_min and 2·x1_min·n1 < x_max",
            ));
        }
        let kappa = -spec.grading.ln();
        let first = 2.0 * spec.x1_min;
        let x = spec.x_max;
        let n = spec.n1 as f64;
        // For a given b, choose 1/H so that s(first) = 1; then match s(X) = n1.
        let inv_h_for = |b: f64| (1.0 - (first / b).ln_1p() / kappa) / first;
        let count = |b: f64| (x / b).ln_1p() / kappa + x * inv_h_for(b);
        let b_min = first / kappa.exp_m1();
        let n_geo = (x / b_min).ln_1p() / kappa;
        if n < n_geo {
            return Err(Error::invalid(
                "n1",
                format!(
                    "{} normal cells cannot reach x_max at grading {}; need at least {}",
                    spec.n1,
                    spec.grading,
                    n_geo.ceil()
                ),
            ));
        }
        let (mut lo, mut hi) = (b_min.ln(), (1e6 * x).ln());
        if count(hi.exp()) < n {
            return Err(Error::invalid("x1_min", "grid too fine near the boundary for n1 cells"));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if count(mid.exp()) > n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let b = (0.5 * (lo + hi)).exp();
        let grading = Grading {
            kappa,
            b,
            inv_h: inv_h_for(b).max(0.0),
            density: 1.0,
        };
        Self::from_grading(spec, grading)
    }

    fn from_grading(spec: GridSpec, grading: Grading) -> Result<Self> {
        let n1 = spec.n1;
        let x = spec.x_max;
        let mut edges = Vec::with_capacity(n1 + 1);
        edges.push(0.0);
        for k in 1..n1 {
            edges.push(grading.inverse(k as f64, x));
        }
        edges.push(x);
        let widths: Vec<f64> = edges.windows(2).map(|e| e[1] - e[0]).collect();
        if widths.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::invalid("n1", "degenerate normal cells"));
        }
        let normal: Vec<f64> = edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect();
        let (lateral, dx2) = if spec.dim == 2 {
            let dx2 = 2.0 * spec.lambda / spec.n2 as f64;
            (
                (0..spec.n2).map(|j| -spec.lambda + j as f64 * dx2).collect(),
                dx2,
            )
        } else {
            (vec![0.0], 1.0)
        };
        let mut spec = spec;
        spec.x1_min = normal[0];
        if spec.dim == 1 {
            spec.n2 = 1;
        }
        Ok(HalfSpaceGrid {
            spec,
            grading,
            edges,
            normal,
            widths,
            lateral,
            dx2,
        })
    }

    /// The dyadic refinement: every normal cell and lateral spacing halved.
    pub fn refine(&self) -> Result<Self> {
        let mut spec = self.spec.clone();
        spec.n1 *= 2;
        if spec.dim == 2 {
            spec.n2 *= 2;
        }
        let mut g = self.grading;
        g.density *= 2.0;
        Self::from_grading(spec, g)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn n1(&self) -> usize {
        self.normal.len()
    }

    pub fn n2(&self) -> usize {
        self.lateral.len()
    }

    pub fn len(&self) -> usize {
        self.n1() * self.n2()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x_max(&self) -> f64 {
        self.spec.x_max
    }

    pub fn lambda(&self) -> f64 {
        self.spec.lambda
    }

    pub fn normal_nodes(&self) -> &[f64] {
        &self.normal
    }

    pub fn normal_edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn normal_widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn lateral_nodes(&self) -> &[f64] {
        &self.lateral
    }

    /// Lateral spacing (1 for `dim = 1`).
    pub fn lateral_spacing(&self) -> f64 {
        self.dx2
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n2() + j
    }

    /// Coordinates `(x₁, x₂)` (or `(x₁)`) of a flat node index.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        let (i, j) = (idx / self.n2(), idx % self.n2());
        if self.dim() == 1 {
            vec![self.normal[i]]
        } else {
            vec![self.normal[i], self.lateral[j]]
        }
    }

    pub fn x1(&self, idx: usize) -> f64 {
        self.normal[idx / self.n2()]
    }

    /// Cell weight of node `idx`.
    pub fn weight(&self, idx: usize) -> f64 {
        self.widths[idx / self.n2()] * self.dx2
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.weight(k)).collect()
    }

    /// `∫ x₁^γ` over each normal cell.
    ///
    /// Exact for `−1 < γ < 0`, where the midpoint rule loses order to the
    /// singularity; midpoint otherwise, including shifted weights `γ ≤ −1`
    /// whose first-cell moment diverges.
    pub fn normal_moments(&self, gamma: f64) -> Vec<f64> {
        if gamma > -1.0 && gamma < 0.0 {
            let g1 = gamma + 1.0;
            self.edges.windows(2).map(|e| (e[1].powf(g1) - e[0].powf(g1)) / g1).collect()
        } else {
            self.normal.iter().zip(&self.widths).map(|(x, w)| w * x.powf(gamma)).collect()
        }
    }

    /// Total weighted measure of the grid, `Σ_i ∫_{cell i} x₁^γ`.
    pub fn weighted_measure(&self, gamma: f64) -> f64 {
        self.normal_moments(gamma).iter().sum::<f64>() * self.dx2 * self.n2() as f64
    }
}
