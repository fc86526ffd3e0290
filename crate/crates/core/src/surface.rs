//! Hypersurfaces given by a chart, and their sampling onto a grid.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::ambient::AmbientSpace;
use crate::calculus::{Chart, ChartGrid, GeometryField, Jet2, JetConfig};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::shape::{shape_operator, unit_normal, ShapeFrame};

/// Band `|x_axis − value| < 2 h_axis` dropped from reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exclusion {
    pub axis: usize,
    pub value: f64,
}

/// A chart composed with a linear map of the embedding space.
struct Transformed {
    inner: Arc<dyn Chart>,
    q: DMatrix<f64>,
}

impl Chart for Transformed {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn embedding_dim(&self) -> usize {
        self.q.nrows()
    }

    fn eval(&self, x: &[f64]) -> DVector<f64> {
        &self.q * self.inner.eval(x)
    }

    /// Chain rule for the linear map: `q` applied to the inner jet.
    fn jet(&self, x: &[f64], cfg: JetConfig) -> Result<Jet2> {
        let j = self.inner.jet(x, cfg)?;
        Ok(Jet2 {
            value: &self.q * &j.value,
            d1: j.d1.iter().map(|v| &self.q * v).collect(),
            d2: j.d2.iter().map(|row| row.iter().map(|v| &self.q * v).collect()).collect(),
        })
    }
}

/// An immersed hypersurface of a space form, together with its default sampling.
#[derive(Clone)]
pub struct Surface {
    pub id: String,
    pub space: AmbientSpace,
    pub chart: Arc<dyn Chart>,
    pub grid: ChartGrid,
    /// `±1`, multiplies the normal chosen by [`unit_normal`].
    pub orientation: f64,
    pub isothermal: bool,
    pub exclusions: Vec<Exclusion>,
}

impl std::fmt::Debug for Surface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Surface")
            .field("id", &self.id)
            .field("space", &self.space)
            .field("grid", &self.grid)
            .field("orientation", &self.orientation)
            .finish_non_exhaustive()
    }
}

impl Surface {
    pub fn new(id: impl Into<String>, space: AmbientSpace, chart: Arc<dyn Chart>, grid: ChartGrid) -> Result<Self> {
        if chart.embedding_dim() != space.embedding_dim() {
            return Err(Error::Dimension { expected: space.embedding_dim(), got: chart.embedding_dim() });
        }
        if chart.dim() + 1 != space.intrinsic_dim() || grid.dim() != chart.dim() {
            return Err(Error::Dimension { expected: space.intrinsic_dim() - 1, got: chart.dim() });
        }
        Ok(Self {
            id: id.into(),
            space,
            chart,
            grid,
            orientation: 1.0,
            isothermal: false,
            exclusions: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn with_orientation(mut self, orientation: f64) -> Self {
        self.orientation = orientation.signum();
        self
    }

    pub fn flipped(&self) -> Self {
        let mut s = self.clone();
        s.orientation = -s.orientation;
        s
    }

    pub fn with_grid(mut self, grid: ChartGrid) -> Result<Self> {
        if grid.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: grid.dim() });
        }
        self.grid = grid;
        Ok(self)
    }

    /// Composes the chart with an ambient isometry `q` (orthogonal, or
    /// Lorentz-orthogonal on the hyperboloid).
    pub fn transformed(&self, q: DMatrix<f64>) -> Result<Self> {
        let n = self.space.embedding_dim();
        if q.nrows() != n || q.ncols() != n {
            return Err(Error::Dimension { expected: n, got: q.nrows() });
        }
        let mut s = self.clone();
        s.chart = Arc::new(Transformed { inner: self.chart.clone(), q });
        Ok(s)
    }

    /// True if the node may appear in reports.
    pub fn reportable(&self, grid: &ChartGrid, node: usize) -> bool {
        if !grid.is_interior(node) {
            return false;
        }
        let x = grid.coords(node);
        !self
            .exclusions
            .iter()
            .any(|e| (x[e.axis] - e.value).abs() < 2.0 * grid.spacing(e.axis))
    }

    /// Jets, frames and metric data at every grid node.
    pub fn sample(&self, cfg: JetConfig, exec: Exec) -> Result<SampledSurface> {
        let grid = &self.grid;
        let nodes = exec.try_map(grid.len(), |n| -> Result<(Jet2, ShapeFrame)> {
            let j = self.chart.jet(&grid.coords(n), cfg)?;
            let eta = unit_normal(&j, &self.space, self.orientation)?;
            let fr = shape_operator(&j, &eta, &self.space)?;
            Ok((j, fr))
        })?;
        let (jets, frames): (Vec<_>, Vec<_>) = nodes.into_iter().unzip();
        let geo = GeometryField::from_jets(grid, &jets, &self.space)?;
        let mask = (0..grid.len()).map(|n| self.reportable(grid, n)).collect();
        Ok(SampledSurface {
            space: self.space,
            jets,
            frames,
            geo,
            mask,
        })
    }
}

/// Per-node data of a surface on its grid.
#[derive(Debug, Clone)]
pub struct SampledSurface {
    pub space: AmbientSpace,
    pub jets: Vec<Jet2>,
    pub frames: Vec<ShapeFrame>,
    pub geo: GeometryField,
    /// Nodes eligible for reports (interior, not excluded).
    pub mask: Vec<bool>,
}

impl SampledSurface {
    pub fn grid(&self) -> &ChartGrid {
        &self.geo.grid
    }

    pub fn dim(&self) -> usize {
        self.geo.dim()
    }

    pub fn len(&self) -> usize {
        self.jets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jets.is_empty()
    }

    pub fn excluded(&self) -> usize {
        self.mask.iter().filter(|m| !**m).count()
    }
}
