//! Intrinsic operators on grid fields.
//!
//! The Laplacian follows the geometers' sign, `Δf = -div grad f`, so it is a
//! non-negative operator: on the unit circle `Δ sin(ku) = k² sin(ku)`.

use nalgebra::DMatrix;

use super::field::{Differentiator, ScalarFieldSample};
use super::grid::ChartGrid;
use super::jet::Jet2;
use super::metric::{christoffel_from_jet, metric, Christoffel};
use crate::ambient::AmbientSpace;
use crate::error::Result;

/// Contravariant (or, where stated, covariant) components of a vector field.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub comps: Vec<ScalarFieldSample>,
}

/// A `(1,1)` tensor field `T^j_k`, component `j*m + k`; also used for
/// covariant 2-tensors (`T_jk`) where documented.
#[derive(Debug, Clone)]
pub struct TensorField {
    pub m: usize,
    pub comps: Vec<ScalarFieldSample>,
}

impl TensorField {
    pub fn at(&self, node: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.m, self.m, |j, k| self.comps[j * self.m + k][node])
    }

    pub fn from_nodes(m: usize, mats: &[DMatrix<f64>]) -> Self {
        let comps = (0..m * m)
            .map(|c| ScalarFieldSample::new(mats.iter().map(|a| a[(c / m, c % m)]).collect()))
            .collect();
        Self { m, comps }
    }

    pub fn scale_by(&self, s: &ScalarFieldSample) -> Self {
        Self {
            m: self.m,
            comps: self.comps.iter().map(|c| c.zip_with(s, |a, b| a * b)).collect(),
        }
    }
}

/// Per-node metric data over a grid: everything the intrinsic operators consume.
#[derive(Debug, Clone)]
pub struct GeometryField {
    pub grid: ChartGrid,
    pub g: Vec<DMatrix<f64>>,
    pub g_inv: Vec<DMatrix<f64>>,
    pub sqrt_det: ScalarFieldSample,
    pub gamma: Vec<Christoffel>,
}

impl GeometryField {
    /// Builds the field from one jet per node, with Christoffel symbols taken
    /// from the jets' second derivatives.
    pub fn from_jets(grid: &ChartGrid, jets: &[Jet2], space: &AmbientSpace) -> Result<Self> {
        let mut g = Vec::with_capacity(jets.len());
        let mut g_inv = Vec::with_capacity(jets.len());
        let mut sqrt_det = Vec::with_capacity(jets.len());
        let mut gamma = Vec::with_capacity(jets.len());
        for j in jets {
            let md = metric(j, space)?;
            gamma.push(christoffel_from_jet(j, &md, space));
            sqrt_det.push(md.det.sqrt());
            g.push(md.g);
            g_inv.push(md.g_inv);
        }
        Ok(Self {
            grid: grid.clone(),
            g,
            g_inv,
            sqrt_det: ScalarFieldSample::new(sqrt_det),
            gamma,
        })
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn nodes(&self) -> std::ops::Range<usize> {
        0..self.grid.len()
    }

    /// Metric-component fields `g_ij` (for metric-only formulas).
    pub fn metric_component(&self, i: usize, j: usize) -> ScalarFieldSample {
        ScalarFieldSample::new(self.g.iter().map(|g| g[(i, j)]).collect())
    }

    /// `(grad f)^i = g^{ij} ∂_j f` and `|grad f|²`.
    pub fn grad(&self, f: &ScalarFieldSample, d: &Differentiator) -> (VectorField, ScalarFieldSample) {
        let df = d.gradient_components(f);
        let grad = self.raise(&df);
        let norm2 = self.covector_norm2(&df);
        (grad, norm2)
    }

    /// Raises a 1-form's index.
    pub fn raise(&self, form: &[ScalarFieldSample]) -> VectorField {
        let m = self.dim();
        let comps = (0..m)
            .map(|i| {
                ScalarFieldSample::new(
                    self.nodes()
                        .map(|n| (0..m).map(|j| self.g_inv[n][(i, j)] * form[j][n]).sum())
                        .collect(),
                )
            })
            .collect();
        VectorField { comps }
    }

    pub fn covector_norm2(&self, form: &[ScalarFieldSample]) -> ScalarFieldSample {
        let m = self.dim();
        ScalarFieldSample::new(
            self.nodes()
                .map(|n| {
                    let mut s = 0.0;
                    for i in 0..m {
                        for j in 0..m {
                            s += self.g_inv[n][(i, j)] * form[i][n] * form[j][n];
                        }
                    }
                    s
                })
                .collect(),
        )
    }

    pub fn vector_norm2(&self, x: &VectorField) -> ScalarFieldSample {
        let m = self.dim();
        ScalarFieldSample::new(
            self.nodes()
                .map(|n| {
                    let mut s = 0.0;
                    for i in 0..m {
                        for j in 0..m {
                            s += self.g[n][(i, j)] * x.comps[i][n] * x.comps[j][n];
                        }
                    }
                    s
                })
                .collect(),
        )
    }

    /// `div X = (1/√det g) ∂_i(√det g X^i)`.
    pub fn divergence_vec(&self, x: &VectorField, d: &Differentiator) -> ScalarFieldSample {
        let mut acc = ScalarFieldSample::constant(&self.grid, 0.0);
        for (i, xi) in x.comps.iter().enumerate() {
            let weighted = xi.zip_with(&self.sqrt_det, |a, b| a * b);
            acc = acc.zip_with(&d.d1(&weighted, i), |a, b| a + b);
        }
        acc.zip_with(&self.sqrt_det, |a, s| a / s)
    }

    /// Geometers' Laplace–Beltrami operator, `Δf = -(1/√g) ∂_i(√g g^{ij} ∂_j f)`.
    pub fn laplace_beltrami(&self, f: &ScalarFieldSample, d: &Differentiator) -> ScalarFieldSample {
        let (grad, _) = self.grad(f, d);
        self.divergence_vec(&grad, d).map(|v| -v)
    }

    /// Covariant Hessian `(Hess f)_ij = ∂_i∂_j f − Γ^k_ij ∂_k f`.
    pub fn hessian(&self, f: &ScalarFieldSample, d: &Differentiator) -> TensorField {
        let m = self.dim();
        let df = d.gradient_components(f);
        let mut comps = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let dd = d.d2(f, i, j);
                comps.push(ScalarFieldSample::new(
                    self.nodes()
                        .map(|n| dd[n] - (0..m).map(|k| self.gamma[n].get(k, i, j) * df[k][n]).sum::<f64>())
                        .collect(),
                ));
            }
        }
        // symmetrize
        for i in 0..m {
            for j in (i + 1)..m {
                let s = comps[i * m + j].zip_with(&comps[j * m + i], |a, b| 0.5 * (a + b));
                comps[i * m + j] = s.clone();
                comps[j * m + i] = s;
            }
        }
        TensorField { m, comps }
    }

    /// `g^{ij} T_ij` for a covariant 2-tensor.
    pub fn trace_covariant(&self, t: &TensorField) -> ScalarFieldSample {
        let m = self.dim();
        ScalarFieldSample::new(
            self.nodes()
                .map(|n| {
                    let mut s = 0.0;
                    for i in 0..m {
                        for j in 0..m {
                            s += self.g_inv[n][(i, j)] * t.comps[i * m + j][n];
                        }
                    }
                    s
                })
                .collect(),
        )
    }

    /// `(∇_i A)^j_k = ∂_i A^j_k + Γ^j_il A^l_k − A^j_l Γ^l_ik`, one tensor per `i`,
    /// together with the full contraction `|∇A|²`.
    pub fn covariant_derivative(&self, a: &TensorField, d: &Differentiator) -> (Vec<TensorField>, ScalarFieldSample) {
        let m = self.dim();
        let partials: Vec<Vec<ScalarFieldSample>> =
            a.comps.iter().map(|c| d.gradient_components(c)).collect();
        let mut nabla = Vec::with_capacity(m);
        for i in 0..m {
            let mut comps = Vec::with_capacity(m * m);
            for j in 0..m {
                for k in 0..m {
                    comps.push(ScalarFieldSample::new(
                        self.nodes()
                            .map(|n| {
                                let g = &self.gamma[n];
                                let mut v = partials[j * m + k][i][n];
                                for l in 0..m {
                                    v += g.get(j, i, l) * a.comps[l * m + k][n]
                                        - a.comps[j * m + l][n] * g.get(l, i, k);
                                }
                                v
                            })
                            .collect(),
                    ));
                }
            }
            nabla.push(TensorField { m, comps });
        }
        let norm2 = ScalarFieldSample::new(
            self.nodes()
                .map(|n| {
                    let (g, gi) = (&self.g[n], &self.g_inv[n]);
                    let mut s = 0.0;
                    for i in 0..m {
                        for i2 in 0..m {
                            for j in 0..m {
                                for j2 in 0..m {
                                    for k in 0..m {
                                        for k2 in 0..m {
                                            s += gi[(i, i2)]
                                                * g[(j, j2)]
                                                * gi[(k, k2)]
                                                * nabla[i].comps[j * m + k][n]
                                                * nabla[i2].comps[j2 * m + k2][n];
                                        }
                                    }
                                }
                            }
                        }
                    }
                    s
                })
                .collect(),
        );
        (nabla, norm2)
    }

    /// `(Div S)_k = (∇_i S)^i_k`, returned as 1-form components.
    pub fn divergence_op(&self, s: &TensorField, d: &Differentiator) -> Vec<ScalarFieldSample> {
        let m = self.dim();
        let (nabla, _) = self.covariant_derivative(s, d);
        (0..m)
            .map(|k| {
                let mut acc = ScalarFieldSample::constant(&self.grid, 0.0);
                for (i, t) in nabla.iter().enumerate() {
                    acc = acc.zip_with(&t.comps[i * m + k], |a, b| a + b);
                }
                acc
            })
            .collect()
    }

    /// `A(X)^j = A^j_k X^k`.
    pub fn apply(&self, a: &TensorField, x: &VectorField) -> VectorField {
        let m = self.dim();
        let comps = (0..m)
            .map(|j| {
                ScalarFieldSample::new(
                    self.nodes()
                        .map(|n| (0..m).map(|k| a.comps[j * m + k][n] * x.comps[k][n]).sum())
                        .collect(),
                )
            })
            .collect();
        VectorField { comps }
    }

    /// Gaussian curvature of a 2-metric by the Brioschi formula.
    pub fn gaussian_curvature_brioschi(&self, d: &Differentiator) -> ScalarFieldSample {
        assert_eq!(self.dim(), 2, "Brioschi formula needs a 2-dimensional chart");
        let e = self.metric_component(0, 0);
        let f = self.metric_component(0, 1);
        let g = self.metric_component(1, 1);
        let (e_u, e_v) = (d.d1(&e, 0), d.d1(&e, 1));
        let (f_u, f_v) = (d.d1(&f, 0), d.d1(&f, 1));
        let (g_u, g_v) = (d.d1(&g, 0), d.d1(&g, 1));
        let e_vv = d.d2(&e, 1, 1);
        let f_uv = d.d2(&f, 0, 1);
        let g_uu = d.d2(&g, 0, 0);
        ScalarFieldSample::new(
            self.nodes()
                .map(|n| {
                    let (e, f, g) = (e[n], f[n], g[n]);
                    let m1 = nalgebra::Matrix3::new(
                        -0.5 * e_vv[n] + f_uv[n] - 0.5 * g_uu[n],
                        0.5 * e_u[n],
                        f_u[n] - 0.5 * e_v[n],
                        f_v[n] - 0.5 * g_u[n],
                        e,
                        f,
                        0.5 * g_v[n],
                        f,
                        g,
                    );
                    let m2 = nalgebra::Matrix3::new(
                        0.0,
                        0.5 * e_v[n],
                        0.5 * g_u[n],
                        0.5 * e_v[n],
                        e,
                        f,
                        0.5 * g_u[n],
                        f,
                        g,
                    );
                    let w = e * g - f * f;
                    (m1.determinant() - m2.determinant()) / (w * w)
                })
                .collect(),
        )
    }

    /// `K = -Δ₀(log λ) / (2λ)` for an isothermal metric `λ(du² + dv²)`.
    pub fn gaussian_curvature_conformal(&self, d: &Differentiator) -> ScalarFieldSample {
        assert_eq!(self.dim(), 2, "conformal formula needs a 2-dimensional chart");
        let lambda = ScalarFieldSample::new(self.g.iter().map(|g| 0.5 * (g[(0, 0)] + g[(1, 1)])).collect());
        let lap = d.flat_laplacian(&lambda.map(f64::ln));
        lap.zip_with(&lambda, |l, lam| -l / (2.0 * lam))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{jet, Axis, FnChart, JetConfig, StencilOrder};
    use nalgebra::DVector;
    use std::f64::consts::{PI, TAU};

    fn build(chart: &FnChart<impl Fn(&[f64]) -> DVector<f64> + Send + Sync>, grid: &ChartGrid, space: &AmbientSpace) -> GeometryField {
        let jets: Vec<_> = (0..grid.len())
            .map(|n| jet(chart, &grid.coords(n), JetConfig::default()).unwrap())
            .collect();
        GeometryField::from_jets(grid, &jets, space).unwrap()
    }

    fn max_err(f: &ScalarFieldSample, exact: impl Fn(&[f64]) -> f64, grid: &ChartGrid) -> f64 {
        (0..grid.len())
            .filter(|&n| f.is_defined(n))
            .map(|n| (f[n] - exact(&grid.coords(n))).abs())
            .fold(0.0, f64::max)
    }

    fn sphere_chart() -> FnChart<impl Fn(&[f64]) -> DVector<f64> + Send + Sync> {
        FnChart::new(2, 3, |x: &[f64]| {
            let (t, p) = (x[0], x[1]);
            DVector::from_vec(vec![t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
        })
    }

    #[test]
    fn circle_laplacian_has_geometers_sign() {
        let chart = FnChart::new(1, 2, |x: &[f64]| DVector::from_vec(vec![x[0].cos(), x[0].sin()]));
        let grid = ChartGrid::new(vec![Axis::periodic(0.0, TAU, 128)], 2).unwrap();
        let geo = build(&chart, &grid, &AmbientSpace::euclidean(2));
        let d = Differentiator::new(&grid, StencilOrder::Four, false);
        let f = ScalarFieldSample::from_fn(&grid, |x| (2.0 * x[0]).sin());
        let lap = geo.laplace_beltrami(&f, &d);
        assert!(max_err(&lap, |x| 4.0 * (2.0 * x[0]).sin(), &grid) < 1e-4);
    }

    #[test]
    fn polar_radial_field_has_divergence_two() {
        let chart = FnChart::new(2, 2, |x: &[f64]| {
            DVector::from_vec(vec![x[0] * x[1].cos(), x[0] * x[1].sin()])
        });
        let grid = ChartGrid::new(vec![Axis::closed(0.5, 2.0, 33), Axis::periodic(0.0, TAU, 64)], 2)
            .unwrap();
        let geo = build(&chart, &grid, &AmbientSpace::euclidean(2));
        let d = Differentiator::new(&grid, StencilOrder::Four, false);
        let x = VectorField {
            comps: vec![
                ScalarFieldSample::from_fn(&grid, |x| x[0]),
                ScalarFieldSample::constant(&grid, 0.0),
            ],
        };
        let div = geo.divergence_vec(&x, &d);
        assert!(max_err(&div, |_| 2.0, &grid) < 1e-9);
        assert!(max_err(&geo.vector_norm2(&x), |x| x[0] * x[0], &grid) < 1e-9);
    }

    #[test]
    fn sphere_coordinate_functions_are_eigenfunctions() {
        let chart = sphere_chart();
        let grid = ChartGrid::new(vec![Axis::closed(0.4, PI - 0.4, 65), Axis::periodic(0.0, TAU, 64)], 2)
            .unwrap();
        let geo = build(&chart, &grid, &AmbientSpace::euclidean(3));
        let d = Differentiator::new(&grid, StencilOrder::Four, true);
        let z = ScalarFieldSample::from_fn(&grid, |x| x[0].cos());
        let lap = geo.laplace_beltrami(&z, &d);
        assert!(max_err(&lap, |x| 2.0 * x[0].cos(), &grid) < 1e-6);
        // trace of the Hessian is minus the Laplacian
        let tr = geo.trace_covariant(&geo.hessian(&z, &d));
        let sum = tr.zip_with(&lap, |a, b| a + b);
        assert!(max_err(&sum, |_| 0.0, &grid) < 1e-6);
        // on the unit sphere Hess z = -z g
        let h = geo.hessian(&z, &d);
        assert!(max_err(&h.comps[0], |x| -x[0].cos(), &grid) < 1e-6);
        assert!(max_err(&h.comps[1], |_| 0.0, &grid) < 1e-6);
    }

    #[test]
    fn conformal_symbols_and_curvature() {
        // λ(u) (du² + dv²) realised by a surface of revolution in arc-length-free form:
        // the unit sphere in Mercator coordinates, λ = sech² u, K = 1.
        let chart = FnChart::new(2, 3, |x: &[f64]| {
            let s = 1.0 / x[0].cosh();
            DVector::from_vec(vec![s * x[1].cos(), s * x[1].sin(), x[0].tanh()])
        });
        let grid = ChartGrid::new(vec![Axis::closed(-1.0, 1.0, 65), Axis::periodic(0.0, TAU, 64)], 2)
            .unwrap();
        let geo = build(&chart, &grid, &AmbientSpace::euclidean(3));
        let d = Differentiator::new(&grid, StencilOrder::Four, true);
        for n in 0..grid.len() {
            let u = grid.coords(n)[0];
            assert!((geo.gamma[n].get(0, 0, 0) + u.tanh()).abs() < 1e-8);
        }
        let kc = geo.gaussian_curvature_conformal(&d);
        let kb = geo.gaussian_curvature_brioschi(&d);
        assert!(max_err(&kc, |_| 1.0, &grid) < 1e-7);
        assert!(max_err(&kb, |_| 1.0, &grid) < 1e-7);
    }

    #[test]
    fn parallel_shape_operator_has_zero_covariant_derivative() {
        let chart = sphere_chart();
        let grid = ChartGrid::new(vec![Axis::closed(0.4, PI - 0.4, 33), Axis::periodic(0.0, TAU, 48)], 2)
            .unwrap();
        let geo = build(&chart, &grid, &AmbientSpace::euclidean(3));
        let d = Differentiator::new(&grid, StencilOrder::Four, false);
        let id = TensorField::from_nodes(2, &vec![DMatrix::identity(2, 2); grid.len()]);
        let (_, n2) = geo.covariant_derivative(&id, &d);
        assert!(max_err(&n2, |_| 0.0, &grid) < 1e-20);
        let div = geo.divergence_op(&id, &d);
        assert!(max_err(&div[0], |_| 0.0, &grid) < 1e-10);
    }

    #[test]
    fn gradient_norm_of_height() {
        let chart = sphere_chart();
        let grid = ChartGrid::new(vec![Axis::closed(0.4, PI - 0.4, 33), Axis::periodic(0.0, TAU, 48)], 2)
            .unwrap();
        let geo = build(&chart, &grid, &AmbientSpace::euclidean(3));
        let d = Differentiator::new(&grid, StencilOrder::Four, true);
        let z = ScalarFieldSample::from_fn(&grid, |x| x[0].cos());
        let (grad, n2) = geo.grad(&z, &d);
        assert!(max_err(&n2, |x| x[0].sin().powi(2), &grid) < 1e-7);
        let back = geo.vector_norm2(&grad);
        assert!(max_err(&back.zip_with(&n2, |a, b| a - b), |_| 0.0, &grid) < 1e-12);
    }
}
