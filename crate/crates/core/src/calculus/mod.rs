//! Chart-based numerical calculus on rectangular grids.
//!
//! Two kinds of differentiation live here. Jets differentiate a chart map
//! directly at a point with a small step (the map can be evaluated anywhere).
//! Grid operators differentiate sampled fields with stencils along grid axes,
//! wrapping on periodic axes. Nodes whose stencil leaves the grid are marked
//! invalid (stored as NaN) and propagate invalidity through nested operators,
//! so every composite is only reported where it is fully defined.

mod chart;
mod field;
mod grid;
mod jet;
mod metric;
mod operators;
pub mod stencil;

pub use chart::{Chart, FnChart};
pub use field::{Differentiator, ScalarFieldSample};
pub use grid::{Axis, ChartGrid};
pub use jet::{jet, Jet2, JetConfig};
pub use metric::{christoffel, christoffel_from_jet, metric, Christoffel, MetricData};
pub use operators::{GeometryField, TensorField, VectorField};
pub use stencil::StencilOrder;
