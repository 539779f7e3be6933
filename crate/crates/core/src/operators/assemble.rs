//! Assembly of the half-space Laplacian and the pullback perturbation terms.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::PullbackMap;
use crate::quadrature::fd_weights;
use crate::spaces::{GridFunction, HalfSpaceGrid};

use super::sparse::{CsrMatrix, TripletBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
        }
    }
}

impl std::str::FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "neumann" => Ok(BoundaryCondition::Neumann),
            _ => Err(Error::invalid("bc", format!("unknown boundary condition '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorLabel {
    Laplacian,
    B1,
    B2,
    B3,
    PullbackLaplacian,
}

impl fmt::Display for OperatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OperatorLabel::Laplacian => "laplacian",
            OperatorLabel::B1 => "b1",
            OperatorLabel::B2 => "b2",
            OperatorLabel::B3 => "b3",
            OperatorLabel::PullbackLaplacian => "pullback_laplacian",
        };
        f.write_str(s)
    }
}

/// A matrix acting on grid functions of one grid.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    grid: Arc<HalfSpaceGrid>,
    matrix: CsrMatrix,
    bc: BoundaryCondition,
    label: OperatorLabel,
    shift: Option<f64>,
}

impl DiscreteOperator {
    pub fn from_parts(
        grid: Arc<HalfSpaceGrid>,
        matrix: CsrMatrix,
        bc: BoundaryCondition,
        label: OperatorLabel,
    ) -> Result<Self> {
        if matrix.dim() != grid.len() {
            return Err(Error::invalid("matrix", "size differs from the grid"));
        }
        Ok(DiscreteOperator {
            grid,
            matrix,
            bc,
            label,
            shift: None,
        })
    }

    pub fn grid(&self) -> &Arc<HalfSpaceGrid> {
        &self.grid
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn label(&self) -> OperatorLabel {
        self.label
    }

    /// `Some(μ)` when this operator is `μ·I − A` for an assembled `A`.
    pub fn shift(&self) -> Option<f64> {
        self.shift
    }

    /// `μ·I − self`.
    pub fn shifted(&self, mu: f64) -> Result<Self> {
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::invalid("mu", "shift must be finite and ≥ 0"));
        }
        if self.shift.is_some() {
            return Err(Error::invalid("mu", "operator is already shifted"));
        }
        Ok(DiscreteOperator {
            grid: Arc::clone(&self.grid),
            matrix: self.matrix.shifted_negation(Complex64::new(mu, 0.0)),
            bc: self.bc,
            label: self.label,
            shift: Some(mu),
        })
    }

    /// `self + other`, keeping the label of `self`.
    pub fn plus(&self, other: &DiscreteOperator) -> Result<Self> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && *self.grid != *other.grid {
            return Err(Error::invalid("other", "operators live on different grids"));
        }
        let one = Complex64::new(1.0, 0.0);
        Ok(DiscreteOperator {
            matrix: self.matrix.combine(one, &other.matrix, one),
            ..self.clone()
        })
    }

    pub fn apply_values(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.matvec(v)
    }

    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        if f.grid().len() != self.grid.len() {
            return Err(Error::invalid("f", "grid function lives on a different grid"));
        }
        GridFunction::new(Arc::clone(f.grid()), self.matrix.matvec(f.values()))
    }

    /// Coordinate-format text export.
    pub fn write_coordinate<W: Write>(&self, w: W) -> Result<()> {
        self.matrix.write_coordinate(w)
    }
}

/// Node-wise coefficient fields of the perturbation terms.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationCoefficients {
    /// `|∇h₁|²` at `Ψ⁻¹(y)`
    pub c1: Vec<f64>,
    /// `∇h₁` at `Ψ⁻¹(y)`, one vector per node
    pub c2: Vec<Vec<f64>>,
    /// `Δh₁` at `Ψ⁻¹(y)`
    pub c3: Vec<f64>,
}

impl PerturbationCoefficients {
    pub fn zeros(n: usize, dim: usize) -> Self {
        PerturbationCoefficients {
            c1: vec![0.0; n],
            c2: vec![vec![0.0; dim]; n],
            c3: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.c1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c1.is_empty()
    }

    /// `max_y |c3(y)|·y₁^{1−λ}`.
    pub fn weighted_c3_bound(&self, grid: &HalfSpaceGrid, lambda: f64) -> f64 {
        self.c3
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * grid.x1(k).powf(1.0 - lambda))
            .fold(0.0, f64::max)
    }
}

/// Evaluates the coefficient fields at every node.
pub fn perturbation_coefficients(
    grid: &HalfSpaceGrid,
    pullback: &PullbackMap,
) -> Result<PerturbationCoefficients> {
    if pullback.dim() != grid.dim() {
        return Err(Error::invalid(
            "grid",
            format!(
                "grid dimension {} differs from the domain dimension {}",
                grid.dim(),
                pullback.dim()
            ),
        ));
    }
    let rows: Result<Vec<(Vec<f64>, f64)>> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let r = pullback.rho_derivatives_at_image(&grid.point(k))?;
            Ok((r.h1_gradient(), r.h1_laplacian()))
        })
        .collect();
    let rows = rows?;
    let mut c = PerturbationCoefficients::zeros(grid.len(), grid.dim());
    for (k, (g, l)) in rows.into_iter().enumerate() {
        c.c1[k] = g.iter().map(|v| v * v).sum();
        c.c2[k] = g;
        c.c3[k] = l;
    }
    Ok(c)
}

/// Weights over unknowns `(i, w)` for `∂₁` and `∂₁²` at normal node `i`,
/// with boundary virtual values folded in.
#[derive(Debug, Clone)]
struct NormalFd {
    d1: Vec<Vec<(usize, f64)>>,
    d2: Vec<Vec<(usize, f64)>>,
}

impl NormalFd {
    fn new(grid: &HalfSpaceGrid, bc: BoundaryCondition) -> Self {
        let x = grid.normal_nodes();
        let n = x.len();
        let big_x = grid.x_max();
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        for i in 0..n {
            // three positions with their values as combinations of unknowns
            let mut pos = Vec::with_capacity(3);
            let mut combo: Vec<Vec<(usize, f64)>> = Vec::with_capacity(3);
            if i == 0 {
                pos.push(0.0);
                combo.push(match bc {
                    BoundaryCondition::Dirichlet => vec![],
                    BoundaryCondition::Neumann => {
                        // even fit u ≈ a + c x² through the first two nodes
                        let r = x[0] * x[0] / (x[1] * x[1] - x[0] * x[0]);
                        vec![(0, 1.0 + r), (1, -r)]
                    }
                });
            } else {
                pos.push(x[i - 1]);
                combo.push(vec![(i - 1, 1.0)]);
            }
            pos.push(x[i]);
            combo.push(vec![(i, 1.0)]);
            if i + 1 == n {
                pos.push(big_x);
                combo.push(match bc {
                    BoundaryCondition::Dirichlet => vec![],
                    BoundaryCondition::Neumann => {
                        let (a, b) = (big_x - x[n - 1], big_x - x[n - 2]);
                        let r = a * a / (b * b - a * a);
                        vec![(n - 1, 1.0 + r), (n - 2, -r)]
                    }
                });
            } else {
                pos.push(x[i + 1]);
                combo.push(vec![(i + 1, 1.0)]);
            }
            let fold = |order: usize| {
                let w = fd_weights(x[i], &pos, order);
                let mut out: Vec<(usize, f64)> = Vec::new();
                for (c, wk) in combo.iter().zip(&w) {
                    for &(j, cj) in c {
                        match out.iter_mut().find(|e| e.0 == j) {
                            Some(e) => e.1 += wk * cj,
                            None => out.push((j, wk * cj)),
                        }
                    }
                }
                out
            };
            d1.push(fold(1));
            d2.push(fold(2));
        }
        NormalFd { d1, d2 }
    }
}

/// `∂₁` on the whole grid with the boundary virtual values of `bc` folded in.
pub(crate) fn normal_gradient(grid: &HalfSpaceGrid, bc: BoundaryCondition) -> CsrMatrix {
    let fd = NormalFd::new(grid, bc);
    let mut t = TripletBuilder::new(grid.len());
    for i in 0..grid.n1() {
        for j in 0..grid.n2() {
            for &(k, w) in &fd.d1[i] {
                t.push(grid.index(i, j), grid.index(k, j), w);
            }
        }
    }
    t.build()
}

fn lateral_neighbours(grid: &HalfSpaceGrid, j: usize) -> (usize, usize) {
    let n2 = grid.n2();
    ((j + n2 - 1) % n2, (j + 1) % n2)
}

/// The discrete Laplacian with the given boundary condition at `x₁ = 0` and `x₁ = X`.
///
/// Normal part in conservative form on the cell-centred grid, so the matrix is
/// self-adjoint in the cell-weighted inner product; lateral part is the periodic
/// three-point stencil.
pub fn assemble_laplacian(grid: Arc<HalfSpaceGrid>, bc: BoundaryCondition) -> DiscreteOperator {
    let x = grid.normal_nodes();
    let w = grid.normal_widths();
    let n1 = grid.n1();
    let n2 = grid.n2();
    let mut t = TripletBuilder::new(grid.len());
    // face conductances: face k sits between node k−1 and node k
    let mut cond = vec![0.0; n1 + 1];
    for k in 1..n1 {
        cond[k] = 1.0 / (x[k] - x[k - 1]);
    }
    if bc == BoundaryCondition::Dirichlet {
        cond[0] = 1.0 / x[0];
        cond[n1] = 1.0 / (grid.x_max() - x[n1 - 1]);
    }
    let h2 = grid.lateral_spacing();
    for i in 0..n1 {
        for j in 0..n2 {
            let row = grid.index(i, j);
            let diag = -(cond[i] + cond[i + 1]) / w[i];
            t.push(row, row, diag);
            if i > 0 {
                t.push(row, grid.index(i - 1, j), cond[i] / w[i]);
            }
            if i + 1 < n1 {
                t.push(row, grid.index(i + 1, j), cond[i + 1] / w[i]);
            }
            if grid.dim() == 2 {
                let (jm, jp) = lateral_neighbours(&grid, j);
                let c = 1.0 / (h2 * h2);
                t.push(row, row, -2.0 * c);
                t.push(row, grid.index(i, jm), c);
                t.push(row, grid.index(i, jp), c);
            }
        }
    }
    DiscreteOperator {
        matrix: t.build(),
        grid,
        bc,
        label: OperatorLabel::Laplacian,
        shift: None,
    }
}

/// One of the perturbation terms `B1 = c1 ∂₁²`, `B2 = −2 c2·∇∂₁`, `B3 = −c3 ∂₁`.
pub fn assemble_perturbation(
    grid: Arc<HalfSpaceGrid>,
    coeffs: &PerturbationCoefficients,
    bc: BoundaryCondition,
    which: OperatorLabel,
) -> Result<DiscreteOperator> {
    if coeffs.len() != grid.len() {
        return Err(Error::invalid("coeffs", "coefficient fields do not match the grid"));
    }
    let parts = match which {
        OperatorLabel::B1 => [true, false, false],
        OperatorLabel::B2 => [false, true, false],
        OperatorLabel::B3 => [false, false, true],
        OperatorLabel::PullbackLaplacian => [true, true, true],
        OperatorLabel::Laplacian => {
            return Err(Error::invalid("which", "not a perturbation term"));
        }
    };
    let mut t = TripletBuilder::new(grid.len());
    push_perturbation(&mut t, &grid, coeffs, bc, parts);
    Ok(DiscreteOperator {
        matrix: t.build(),
        grid,
        bc,
        label: which,
        shift: None,
    })
}

fn push_perturbation(
    t: &mut TripletBuilder,
    grid: &HalfSpaceGrid,
    c: &PerturbationCoefficients,
    bc: BoundaryCondition,
    parts: [bool; 3],
) {
    let fd = NormalFd::new(grid, bc);
    let n2 = grid.n2();
    let h2 = grid.lateral_spacing();
    for i in 0..grid.n1() {
        for j in 0..n2 {
            let row = grid.index(i, j);
            let g = &c.c2[row];
            let mut a11 = 0.0;
            if parts[0] {
                a11 += c.c1[row];
            }
            if parts[1] {
                a11 -= 2.0 * g[0];
            }
            if a11 != 0.0 {
                for &(k, w) in &fd.d2[i] {
                    t.push(row, grid.index(k, j), a11 * w);
                }
            }
            if parts[2] && c.c3[row] != 0.0 {
                for &(k, w) in &fd.d1[i] {
                    t.push(row, grid.index(k, j), -c.c3[row] * w);
                }
            }
            if parts[1] && grid.dim() == 2 && g[1] != 0.0 {
                let (jm, jp) = lateral_neighbours(grid, j);
                let a = -2.0 * g[1] / (2.0 * h2);
                for &(k, w) in &fd.d1[i] {
                    t.push(row, grid.index(k, jp), a * w);
                    t.push(row, grid.index(k, jm), -a * w);
                }
            }
        }
    }
}

/// `Δ^Ψ = Δ + B1 + B2 + B3` from precomputed coefficients.
pub fn assemble_pullback_laplacian_with(
    grid: Arc<HalfSpaceGrid>,
    coeffs: &PerturbationCoefficients,
    bc: BoundaryCondition,
) -> Result<DiscreteOperator> {
    let lap = assemble_laplacian(Arc::clone(&grid), bc);
    let b = assemble_perturbation(grid, coeffs, bc, OperatorLabel::PullbackLaplacian)?;
    let mut op = lap.plus(&b)?;
    op.label = OperatorLabel::PullbackLaplacian;
    Ok(op)
}

/// `Δ^Ψ` with its coefficient fields.
pub fn assemble_pullback_laplacian(
    grid: Arc<HalfSpaceGrid>,
    pullback: &PullbackMap,
    bc: BoundaryCondition,
) -> Result<(DiscreteOperator, PerturbationCoefficients)> {
    let coeffs = perturbation_coefficients(&grid, pullback)?;
    let op = assemble_pullback_laplacian_with(grid, &coeffs, bc)?;
    Ok((op, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CatalogGraph;
    use crate::spaces::GridSpec;

    fn grid1(n1: usize) -> Arc<HalfSpaceGrid> {
        Arc::new(
            HalfSpaceGrid::new(GridSpec {
                n1,
                ..GridSpec::default()
            })
            .unwrap(),
        )
    }

    fn grid2(n1: usize, n2: usize, x_max: f64) -> Arc<HalfSpaceGrid> {
        Arc::new(
            HalfSpaceGrid::new(GridSpec {
                dim: 2,
                n1,
                n2,
                x_max,
                ..GridSpec::default()
            })
            .unwrap(),
        )
    }

    #[test]
    fn sine_is_an_approximate_eigenfunction() {
        let g = grid1(256);
        let a = assemble_laplacian(Arc::clone(&g), BoundaryCondition::Dirichlet);
        let k = std::f64::consts::PI / g.x_max();
        let f = GridFunction::from_real_fn(Arc::clone(&g), |x| (k * x[0]).sin());
        let af = a.apply(&f).unwrap();
        for i in 1..g.n1() - 1 {
            let want = -k * k * f.values()[i].re;
            assert!((af.values()[i].re - want).abs() < 2e-3 * k * k, "{i}");
        }
    }

    #[test]
    fn neumann_kills_constants() {
        for g in [grid1(64), grid2(48, 16, 4.0)] {
            let a = assemble_laplacian(Arc::clone(&g), BoundaryCondition::Neumann);
            let f = GridFunction::from_real_fn(Arc::clone(&g), |_| 1.0);
            assert!(a.apply(&f).unwrap().values().iter().all(|v| v.norm() < 1e-9));
        }
    }

    #[test]
    fn zero_graph_gives_the_plain_laplacian() {
        let g = grid2(48, 16, 4.0);
        let p = PullbackMap::new(Arc::new(CatalogGraph::zero(2).unwrap())).unwrap();
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let (op, c) = assemble_pullback_laplacian(Arc::clone(&g), &p, bc).unwrap();
            assert!(c.c1.iter().chain(&c.c3).all(|&v| v == 0.0));
            assert_eq!(op.matrix(), assemble_laplacian(Arc::clone(&g), bc).matrix());
        }
    }

    #[test]
    fn c1_is_the_squared_gradient() {
        let g = grid2(40, 16, 4.0);
        let p = PullbackMap::new(Arc::new(CatalogGraph::bump(2, 0.05, 1.0).unwrap())).unwrap();
        let c = perturbation_coefficients(&g, &p).unwrap();
        for k in 0..c.len() {
            let s: f64 = c.c2[k].iter().map(|v| v * v).sum();
            assert!((c.c1[k] - s).abs() <= 1e-12);
            assert!(c.c1[k] >= 0.0);
        }
        assert!(c.c1.iter().any(|&v| v > 0.0));
    }

    #[test]
    fn fd_stencils_differentiate_quadratics_in_the_interior() {
        let g = grid1(64);
        let fd = NormalFd::new(&g, BoundaryCondition::Dirichlet);
        let x = g.normal_nodes();
        for i in 1..g.n1() - 1 {
            let d2: f64 = fd.d2[i].iter().map(|&(k, w)| w * x[k] * x[k]).sum();
            let d1: f64 = fd.d1[i].iter().map(|&(k, w)| w * x[k] * x[k]).sum();
            assert!((d2 - 2.0).abs() < 1e-6 * (1.0 + x[i]));
            assert!((d1 - 2.0 * x[i]).abs() < 1e-8 * (1.0 + x[i]));
        }
        // Dirichlet virtual zero at x = 0 is exact for x²
        let d2: f64 = fd.d2[0].iter().map(|&(k, w)| w * x[k] * x[k]).sum();
        assert!((d2 - 2.0).abs() < 1e-6);
    }
}
