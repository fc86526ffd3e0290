//! The three space forms `N^n(c)`, `c ∈ {-1, 0, 1}`, through their flat
//! embedding models.
//!
//! * `c = 0`: Euclidean `R^n` itself.
//! * `c = 1`: the unit sphere in Euclidean `R^{n+1}`.
//! * `c = -1`: the upper sheet of the hyperboloid `<p,p>_L = -1` in Minkowski
//!   `R^{n,1}`, time-like direction stored last.
//!
//! In all three cases a point's model normal is its position vector (none for
//! `c = 0`), so the tangent projection and the second fundamental form share
//! one code path with a sign change.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default tolerance for "point lies on the model manifold".
pub const ON_MANIFOLD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Euclidean,
    Lorentzian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmbientSpace {
    curvature: i8,
    intrinsic_dim: usize,
    embedding_dim: usize,
    signature: Signature,
    tolerance: f64,
}

impl AmbientSpace {
    pub fn new(curvature: i8, intrinsic_dim: usize) -> Result<Self> {
        if intrinsic_dim == 0 {
            return Err(Error::Input("space form dimension must be positive".into()));
        }
        let (embedding_dim, signature) = match curvature {
            0 => (intrinsic_dim, Signature::Euclidean),
            1 => (intrinsic_dim + 1, Signature::Euclidean),
            -1 => (intrinsic_dim + 1, Signature::Lorentzian),
            c => return Err(Error::Input(format!("curvature must be -1, 0 or 1, got {c}"))),
        };
        Ok(Self {
            curvature,
            intrinsic_dim,
            embedding_dim,
            signature,
            tolerance: ON_MANIFOLD_TOL,
        })
    }

    pub fn euclidean(n: usize) -> Self {
        Self::new(0, n).expect("valid")
    }

    pub fn sphere(n: usize) -> Self {
        Self::new(1, n).expect("valid")
    }

    pub fn hyperbolic(n: usize) -> Self {
        Self::new(-1, n).expect("valid")
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn curvature(&self) -> i8 {
        self.curvature
    }

    pub fn c(&self) -> f64 {
        f64::from(self.curvature)
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic_dim
    }

    pub fn embedding_dim(&self) -> usize {
        self.embedding_dim
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.embedding_dim {
            return Err(Error::Dimension {
                expected: self.embedding_dim,
                got: len,
            });
        }
        Ok(())
    }

    /// Model inner product (Euclidean, or Minkowski with the last slot time-like).
    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        Ok(self.dot(x.as_slice(), y.as_slice()))
    }

    /// Unchecked model inner product on raw slices.
    pub fn dot(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let mut s = 0.0;
        for i in 0..n {
            s += x[i] * y[i];
        }
        if self.signature == Signature::Lorentzian {
            s -= 2.0 * x[n - 1] * y[n - 1];
        }
        s
    }

    /// `|<p,p> - 1|` on the sphere, `|<p,p>_L + 1|` on the hyperboloid, 0 in flat space.
    /// The hyperboloid residual also counts a wrong-sheet point as off-manifold.
    pub fn manifold_residual(&self, p: &DVector<f64>) -> f64 {
        match self.curvature {
            0 => 0.0,
            1 => (self.dot(p.as_slice(), p.as_slice()) - 1.0).abs(),
            _ => {
                let r = (self.dot(p.as_slice(), p.as_slice()) + 1.0).abs();
                if p[p.len() - 1] > 0.0 {
                    r
                } else {
                    r.max(1.0)
                }
            }
        }
    }

    /// Removes the position-normal component of `v` at `p`:
    /// `v - <v,p> p` (sphere), `v + <v,p>_L p` (hyperboloid), `v` (flat).
    pub fn project_tangent(&self, p: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(p.len())?;
        self.check_len(v.len())?;
        let residual = self.manifold_residual(p);
        if residual > self.tolerance {
            return Err(Error::OffManifold { residual });
        }
        Ok(self.project_unchecked(p, v))
    }

    /// Random orientation-preserving linear isometry of the model: a rotation
    /// (`c ≥ 0`), or a rotation of the spatial part followed by a boost
    /// (`c = −1`, preserving the upper sheet).
    pub fn random_isometry<R: Rng + ?Sized>(&self, rng: &mut R) -> DMatrix<f64> {
        let n = self.embedding_dim;
        let spatial = if self.curvature == -1 { n - 1 } else { n };
        let mut q = DMatrix::identity(n, n);
        q.view_mut((0, 0), (spatial, spatial)).copy_from(&random_rotation(spatial, rng));
        if self.curvature == -1 {
            let beta: f64 = rng.gen_range(-0.5..0.5);
            let mut boost = DMatrix::identity(n, n);
            let (ch, sh) = (beta.cosh(), beta.sinh());
            boost[(0, 0)] = ch;
            boost[(n - 1, n - 1)] = ch;
            boost[(0, n - 1)] = sh;
            boost[(n - 1, 0)] = sh;
            q = boost * q;
        }
        q
    }

    pub(crate) fn project_unchecked(&self, p: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        match self.curvature {
            0 => v.clone(),
            c => {
                // <p,p> = c for both curved models
                let k = self.dot(v.as_slice(), p.as_slice()) * f64::from(c);
                v - p * k
            }
        }
    }
}

/// Orthogonal `n × n` matrix with determinant +1, from the QR factors of a random matrix.
fn random_rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let qr = a.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}
