//! Complex scalar fields on a [`HalfSpaceGrid`] and their CSV form.

use std::io::{Read, Write};
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::grid::HalfSpaceGrid;

/// Node values of a complex field, in the grid's flat node order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Arc<HalfSpaceGrid>,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Arc<HalfSpaceGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(
                "values",
                format!("expected {} values, got {}", grid.len(), values.len()),
            ));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::invalid("values", "non-finite entry"));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: Arc<HalfSpaceGrid>) -> Self {
        let n = grid.len();
        GridFunction {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Sample `f` at every node.
    pub fn from_fn(grid: Arc<HalfSpaceGrid>, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|k| f(&grid.point(k))).collect();
        GridFunction { grid, values }
    }

    pub fn from_real_fn(grid: Arc<HalfSpaceGrid>, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Arc<HalfSpaceGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        Self::new(Arc::clone(&self.grid), values)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GridFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// `x1, x2..., re, im` with a header row.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = vec!["x1".to_string()];
        if self.grid.dim() == 2 {
            header.push("x2".into());
        }
        header.extend(["re".into(), "im".into()]);
        wtr.write_record(&header)?;
        for (k, v) in self.values.iter().enumerate() {
            let mut row: Vec<String> = self.grid.point(k).iter().map(|c| c.to_string()).collect();
            row.push(v.re.to_string());
            row.push(v.im.to_string());
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Read values written by [`GridFunction::write_csv`]; coordinates must
    /// match the grid nodes.
    pub fn read_csv<R: Read>(grid: Arc<HalfSpaceGrid>, r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let d = grid.dim();
        let mut values = Vec::with_capacity(grid.len());
        for (k, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != d + 2 {
                return Err(Error::Parse(format!("row {k}: expected {} columns", d + 2)));
            }
            if k >= grid.len() {
                return Err(Error::Parse("more rows than grid nodes".into()));
            }
            let num = |c: usize| -> Result<f64> {
                rec[c]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {k}, column {c}: {e}")))
            };
            let p = grid.point(k);
            for (c, &pc) in p.iter().enumerate() {
                if (num(c)? - pc).abs() > 1e-9 * (1.0 + pc.abs()) {
                    return Err(Error::Parse(format!("row {k}: coordinates do not match the grid")));
                }
            }
            values.push(Complex64::new(num(d)?, num(d + 1)?));
        }
        Self::new(grid, values)
    }
}

/// Sidecar CSV `x1, x2..., weight` describing the grid.
pub fn write_grid_csv<W: Write>(grid: &HalfSpaceGrid, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["x1"];
    if grid.dim() == 2 {
        header.push("x2");
    }
    header.push("weight");
    wtr.write_record(&header)?;
    for k in 0..grid.len() {
        let mut row: Vec<String> = grid.point(k).iter().map(|c| c.to_string()).collect();
        row.push(grid.weight(k).to_string());
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

fn same_grid(a: &GridFunction, b: &GridFunction) {
    assert!(
        Arc::ptr_eq(&a.grid, &b.grid) || a.grid == b.grid,
        "grid functions live on different grids"
    );
}

impl Add for &GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: &GridFunction) -> GridFunction {
        same_grid(self, rhs);
        GridFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: &GridFunction) -> GridFunction {
        same_grid(self, rhs);
        GridFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &GridFunction {
    type Output = GridFunction;
    fn mul(self, c: f64) -> GridFunction {
        self.scale(Complex64::new(c, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::grid::GridSpec;

    #[test]
    fn csv_round_trip() {
        let grid = Arc::new(
            HalfSpaceGrid::new(GridSpec {
                dim: 2,
                n1: 64,
                n2: 16,
                ..GridSpec::default()
            })
            .unwrap(),
        );
        let f = GridFunction::from_fn(Arc::clone(&grid), |x| Complex64::new(x[0], x[1]));
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2,re,im\n"));
        let g = GridFunction::read_csv(grid, buf.as_slice()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_wrong_length_and_nan() {
        let grid = Arc::new(HalfSpaceGrid::new(GridSpec { n1: 64, ..GridSpec::default() }).unwrap());
        assert!(GridFunction::new(Arc::clone(&grid), vec![Complex64::new(0.0, 0.0); 3]).is_err());
        let mut v = vec![Complex64::new(0.0, 0.0); grid.len()];
        v[0].re = f64::NAN;
        assert!(GridFunction::new(grid, v).is_err());
    }
}
