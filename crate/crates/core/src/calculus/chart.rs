use nalgebra::DVector;

use super::jet::{Jet2, JetConfig};
use crate::error::Result;

/// A local parametrization into an embedding space.
pub trait Chart: Send + Sync {
    /// Number of chart coordinates.
    fn dim(&self) -> usize;
    /// Length of the returned embedding vectors.
    fn embedding_dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> DVector<f64>;

    /// Value and first two derivatives at `x`; by default central differences of [`Chart::eval`].
    fn jet(&self, x: &[f64], cfg: JetConfig) -> Result<Jet2> {
        super::jet::jet(self, x, cfg)
    }
}

/// A chart backed by a closure.
pub struct FnChart<F> {
    dim: usize,
    embedding_dim: usize,
    f: F,
}

impl<F> FnChart<F>
where
    F: Fn(&[f64]) -> DVector<f64> + Send + Sync,
{
    pub fn new(dim: usize, embedding_dim: usize, f: F) -> Self {
        Self { dim, embedding_dim, f }
    }
}

impl<F> Chart for FnChart<F>
where
    F: Fn(&[f64]) -> DVector<f64> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn embedding_dim(&self) -> usize {
        self.embedding_dim
    }

    fn eval(&self, x: &[f64]) -> DVector<f64> {
        (self.f)(x)
    }
}

impl<C: Chart + ?Sized> Chart for std::sync::Arc<C> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn embedding_dim(&self) -> usize {
        (**self).embedding_dim()
    }

    fn eval(&self, x: &[f64]) -> DVector<f64> {
        (**self).eval(x)
    }

    fn jet(&self, x: &[f64], cfg: JetConfig) -> Result<Jet2> {
        (**self).jet(x, cfg)
    }
}
