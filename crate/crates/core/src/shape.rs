//! Extrinsic geometry of a hypersurface chart inside a space form.

use nalgebra::{DMatrix, DVector};

use crate::ambient::AmbientSpace;
use crate::calculus::{metric, Differentiator, GeometryField, Jet2, ScalarFieldSample};
use crate::error::{Error, Result};

pub const MIN_REJECTION: f64 = 1e-10;
pub const ISOTHERMAL_TOL: f64 = 1e-6;

/// Pointwise extrinsic data of a hypersurface.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeFrame {
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub det_g: f64,
    pub eta: DVector<f64>,
    /// Second fundamental form `B_ij` (covariant).
    pub b: DMatrix<f64>,
    /// Shape operator `A^i_j = g^{ik} B_kj`.
    pub a: DMatrix<f64>,
    pub f: f64,
    /// Principal curvatures, descending.
    pub lambda: Vec<f64>,
    pub norm_a2: f64,
}

impl ShapeFrame {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `Σ λ_i³`.
    pub fn trace_a3(&self) -> f64 {
        self.lambda.iter().map(|l| l * l * l).sum()
    }
}

fn orthonormal_basis(jet: &Jet2, space: &AmbientSpace) -> Vec<(DVector<f64>, f64)> {
    // (vector, <q,q>) pairs spanning position (curved models) and tangent directions
    let mut basis: Vec<(DVector<f64>, f64)> = Vec::new();
    let push = |v: &DVector<f64>, basis: &mut Vec<(DVector<f64>, f64)>| {
        let mut r = v.clone();
        for (q, e) in basis.iter() {
            let k = space.dot(r.as_slice(), q.as_slice()) * e;
            r.axpy(-k, q, 1.0);
        }
        let n2 = space.dot(r.as_slice(), r.as_slice());
        let s = n2.abs().sqrt();
        if s > 0.0 {
            basis.push((r / s, n2.signum()));
        }
    };
    if space.curvature() != 0 {
        push(&jet.value, &mut basis);
    }
    for d in &jet.d1 {
        push(d, &mut basis);
    }
    basis
}

fn orientation_det(jet: &Jet2, space: &AmbientSpace, eta: &DVector<f64>) -> f64 {
    let n = eta.len();
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n);
    if space.curvature() != 0 {
        cols.push(jet.value.clone());
    }
    cols.extend(jet.d1.iter().cloned());
    cols.push(eta.clone());
    DMatrix::from_columns(&cols).determinant()
}

/// Unit normal of the hypersurface inside the space form.
///
/// The seed is the standard basis vector with the largest rejection from the
/// span of the position (curved models) and the chart tangents. The sign is
/// then fixed continuously: `det[p?, ∂_1Φ, …, ∂_mΦ, η]` is made positive and
/// multiplied by `orientation`.
pub fn unit_normal(jet: &Jet2, space: &AmbientSpace, orientation: f64) -> Result<DVector<f64>> {
    let n = jet.value.len();
    if n != space.embedding_dim() {
        return Err(Error::Dimension { expected: space.embedding_dim(), got: n });
    }
    if jet.dim() + 1 != space.intrinsic_dim() {
        return Err(Error::Dimension { expected: space.intrinsic_dim() - 1, got: jet.dim() });
    }
    let basis = orthonormal_basis(jet, space);
    let mut best: Option<(DVector<f64>, f64)> = None;
    for k in 0..n {
        let mut r = DVector::zeros(n);
        r[k] = 1.0;
        for (q, e) in &basis {
            let c = space.dot(r.as_slice(), q.as_slice()) * e;
            r.axpy(-c, q, 1.0);
        }
        let n2 = space.dot(r.as_slice(), r.as_slice());
        if best.as_ref().is_none_or(|(_, b)| n2 > *b) {
            best = Some((r, n2));
        }
    }
    let (r, n2) = best.expect("embedding dimension is positive");
    let norm = n2.max(0.0).sqrt();
    if norm < MIN_REJECTION {
        return Err(Error::DegenerateFrame { norm });
    }
    let mut eta = r / norm;
    // one refinement pass against the frame for round-off
    for (q, e) in &basis {
        let c = space.dot(eta.as_slice(), q.as_slice()) * e;
        eta.axpy(-c, q, 1.0);
    }
    eta /= space.dot(eta.as_slice(), eta.as_slice()).sqrt();
    let det = orientation_det(jet, space, &eta);
    if det < 0.0 {
        eta = -eta;
    }
    if orientation < 0.0 {
        eta = -eta;
    }
    Ok(eta)
}

/// Second fundamental form, shape operator and derived scalars.
pub fn shape_operator(jet: &Jet2, eta: &DVector<f64>, space: &AmbientSpace) -> Result<ShapeFrame> {
    let md = metric(jet, space)?;
    let m = jet.dim();
    let mut b = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = space.project_tangent(&jet.value, &jet.d2[i][j])?;
            let bij = space.dot(v.as_slice(), eta.as_slice());
            b[(i, j)] = bij;
            b[(j, i)] = bij;
        }
    }
    let a = &md.g_inv * &b;
    let f = a.trace() / m as f64;

    let chol = md.g.clone().cholesky().ok_or(Error::DegenerateChart {
        det: md.det,
        at: jet.value.iter().copied().collect(),
    })?;
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or(Error::DegenerateChart { det: md.det, at: jet.value.iter().copied().collect() })?;
    let sym = &l_inv * &b * l_inv.transpose();
    let sym = (&sym + sym.transpose()) * 0.5;
    let norm_a2 = sym.iter().map(|x| x * x).sum();
    let mut lambda: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    lambda.sort_by(|x, y| y.total_cmp(x));

    Ok(ShapeFrame {
        g: md.g,
        g_inv: md.g_inv,
        det_g: md.det,
        eta: eta.clone(),
        b,
        a,
        f,
        lambda,
        norm_a2,
    })
}

/// `S₂ = -(m²/2) f² I + 2m f A`.
pub fn stress_bienergy(frame: &ShapeFrame) -> DMatrix<f64> {
    let m = frame.dim() as f64;
    let f = frame.f;
    DMatrix::identity(frame.dim(), frame.dim()) * (-0.5 * m * m * f * f) + &frame.a * (2.0 * m * f)
}

/// Metric anisotropy `sqrt((g11-g22)² + 4 g12²) / (g11+g22)`, zero for isothermal charts.
pub fn anisotropy(g: &DMatrix<f64>) -> f64 {
    ((g[(0, 0)] - g[(1, 1)]).powi(2) + 4.0 * g[(0, 1)].powi(2)).sqrt() / (g[(0, 0)] + g[(1, 1)])
}

/// `φ_H = <A_H ∂_z, ∂_z>` sampled on the grid together with the
/// Cauchy–Riemann residual `|∂φ_H/∂z̄|`.
#[derive(Debug, Clone)]
pub struct HopfField {
    pub re: ScalarFieldSample,
    pub im: ScalarFieldSample,
    pub cr_residual: ScalarFieldSample,
    pub anisotropy: f64,
}

/// With `z = u + iv` and `∂_z = ½(∂_u − i∂_v)`, complex-bilinear extension gives
/// `φ_H = f·B(∂_z, ∂_z) = (f/4)[(B₁₁ − B₂₂) − 2i B₁₂]`, which for `g = λ δ` equals
/// `(λf/4)[(A¹₁ − A²₂) − i(A¹₂ + A²₁)]`.
pub fn hopf_function(geo: &GeometryField, frames: &[ShapeFrame], d: &Differentiator) -> Result<HopfField> {
    if geo.dim() != 2 {
        return Err(Error::Precondition(format!(
            "Hopf function needs a surface, chart dimension is {}",
            geo.dim()
        )));
    }
    let aniso = frames.iter().map(|fr| anisotropy(&fr.g)).fold(0.0, f64::max);
    if !(aniso <= ISOTHERMAL_TOL) {
        return Err(Error::Precondition(format!(
            "chart is not isothermal: anisotropy {aniso:.3e} exceeds {ISOTHERMAL_TOL:.0e}"
        )));
    }
    let re = ScalarFieldSample::new(
        frames.iter().map(|fr| 0.25 * fr.f * (fr.b[(0, 0)] - fr.b[(1, 1)])).collect(),
    );
    let im = ScalarFieldSample::new(frames.iter().map(|fr| -0.5 * fr.f * fr.b[(0, 1)]).collect());
    let (re_u, re_v) = (d.d1(&re, 0), d.d1(&re, 1));
    let (im_u, im_v) = (d.d1(&im, 0), d.d1(&im, 1));
    // ∂_z̄ φ = ½[(∂_u re − ∂_v im) + i(∂_u im + ∂_v re)]
    let cr = ScalarFieldSample::new(
        (0..re.len())
            .map(|n| 0.5 * (re_u[n] - im_v[n]).hypot(im_u[n] + re_v[n]))
            .collect(),
    );
    Ok(HopfField { re, im, cr_residual: cr, anisotropy: aniso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{jet, Chart, FnChart, JetConfig};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn frame_of(chart: &dyn crate::calculus::Chart, space: &AmbientSpace, x: &[f64], o: f64) -> ShapeFrame {
        let j = jet(chart, x, JetConfig::default()).unwrap();
        let eta = unit_normal(&j, space, o).unwrap();
        shape_operator(&j, &eta, space).unwrap()
    }

    #[test]
    fn graph_chart_normal() {
        let chart = FnChart::new(2, 3, |x: &[f64]| DVector::from_vec(vec![x[0], x[1], 0.0]));
        let j = jet(&chart, &[0.1, 0.2], JetConfig::default()).unwrap();
        let eta = unit_normal(&j, &AmbientSpace::euclidean(3), 1.0).unwrap();
        assert!((eta[2].abs() - 1.0).abs() < 1e-14);
        let flipped = unit_normal(&j, &AmbientSpace::euclidean(3), -1.0).unwrap();
        assert_eq!(eta, -flipped);
    }

    #[test]
    fn clifford_normal_and_frame() {
        let s = FRAC_1_SQRT_2;
        let chart = FnChart::new(2, 4, move |x: &[f64]| {
            DVector::from_vec(vec![s * x[0].cos(), s * x[0].sin(), s * x[1].cos(), s * x[1].sin()])
        });
        let s3 = AmbientSpace::sphere(3);
        let (u, v) = (0.3, 1.1);
        let fr = frame_of(&chart, &s3, &[u, v], 1.0);
        let expect = DVector::from_vec(vec![-u.cos(), -u.sin(), v.cos(), v.sin()]) * s;
        let dist = (&fr.eta - &expect).amax().min((&fr.eta + &expect).amax());
        assert!(dist < 1e-10);
        assert!(fr.f.abs() < 1e-10);
        assert!((fr.lambda[0] - 1.0).abs() < 1e-8 && (fr.lambda[1] + 1.0).abs() < 1e-8);
        assert!((fr.norm_a2 - 2.0).abs() < 1e-8);
        let p = chart.eval(&[u, v]);
        assert!(s3.dot(fr.eta.as_slice(), p.as_slice()).abs() < 1e-12);
    }

    #[test]
    fn small_hypersphere_frame() {
        // S²(r) ⊂ S³ as (r ω(θ, φ), √(1−r²))
        let r = FRAC_1_SQRT_2;
        let chart = FnChart::new(2, 4, move |x: &[f64]| {
            let (t, p) = (x[0], x[1]);
            DVector::from_vec(vec![
                r * t.sin() * p.cos(),
                r * t.sin() * p.sin(),
                r * t.cos(),
                (1.0 - r * r).sqrt(),
            ])
        });
        let s3 = AmbientSpace::sphere(3);
        let x = [1.0, 0.4];
        let fr = frame_of(&chart, &s3, &x, 1.0);
        let fr_flip = frame_of(&chart, &s3, &x, -1.0);
        assert!((fr.f.abs() - 1.0).abs() < 1e-9);
        assert!((fr.f + fr_flip.f).abs() < 1e-15);
        assert!((fr.norm_a2 - 2.0).abs() < 1e-8);
        assert_eq!(fr.norm_a2, fr_flip.norm_a2);
        // closed-form normal up to sign
        let p = chart.eval(&x);
        let omega = DVector::from_vec(vec![p[0] / r, p[1] / r, p[2] / r]);
        let c = (1.0 - r * r).sqrt();
        let expect = DVector::from_vec(vec![-c * omega[0], -c * omega[1], -c * omega[2], r]);
        let dist = (&fr.eta - &expect).amax().min((&fr.eta + &expect).amax());
        assert!(dist < 1e-10);
        let s2 = stress_bienergy(&fr);
        let m = 2.0;
        assert!((s2.trace() - m * m * fr.f * fr.f * (2.0 - m / 2.0)).abs() < 1e-8);
    }

    #[test]
    fn hyperboloid_normal_is_spacelike_unit() {
        // geodesic sphere of radius R in H³
        let big_r: f64 = 0.8;
        let chart = FnChart::new(2, 4, move |x: &[f64]| {
            let (t, p) = (x[0], x[1]);
            let s = big_r.sinh();
            DVector::from_vec(vec![s * t.sin() * p.cos(), s * t.sin() * p.sin(), s * t.cos(), big_r.cosh()])
        });
        let h3 = AmbientSpace::hyperbolic(3);
        let fr = frame_of(&chart, &h3, &[1.2, 0.3], 1.0);
        assert!((h3.dot(fr.eta.as_slice(), fr.eta.as_slice()) - 1.0).abs() < 1e-12);
        let coth = 1.0 / big_r.tanh();
        assert!((fr.lambda[0].abs() - coth).abs() < 1e-8 && (fr.lambda[1].abs() - coth).abs() < 1e-8);
    }

    #[test]
    fn dependent_tangents_are_rejected() {
        let r3 = AmbientSpace::euclidean(3);
        let short = Jet2 {
            value: DVector::zeros(2),
            d1: vec![DVector::from_vec(vec![1.0, 0.0]), DVector::from_vec(vec![0.0, 1.0])],
            d2: vec![vec![DVector::zeros(2); 2]; 2],
        };
        assert!(matches!(unit_normal(&short, &r3, 1.0), Err(Error::Dimension { .. })));
        let parallel = Jet2 {
            value: DVector::zeros(3),
            d1: vec![DVector::from_vec(vec![1.0, 0.0, 0.0]); 2],
            d2: vec![vec![DVector::zeros(3); 2]; 2],
        };
        let eta = unit_normal(&parallel, &r3, 1.0).unwrap();
        assert!(matches!(
            shape_operator(&parallel, &eta, &r3),
            Err(Error::DegenerateChart { .. })
        ));
    }
}
