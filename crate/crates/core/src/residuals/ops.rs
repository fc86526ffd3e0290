use nalgebra::DMatrix;
use serde::Serialize;

use super::report::ResidualField;
use crate::calculus::{Differentiator, ScalarFieldSample, StencilOrder, TensorField, VectorField};
use crate::error::{Error, Result};
use crate::shape::{hopf_function, stress_bienergy};
use crate::surface::SampledSurface;

/// `sup |grad f|` below this counts as constant mean curvature.
pub const CMC_TOL: f64 = 1e-6;
/// Nodes with `|grad K|` below this are left out of the level-curve law.
pub const GRAD_K_MIN: f64 = 1e-6;

fn field(n: usize, f: impl Fn(usize) -> f64) -> ScalarFieldSample {
    ScalarFieldSample::new((0..n).map(f).collect())
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// How the mean-curvature identity for biconservative hypersurfaces is normalised:
/// with `f = (1/m) tr A` as is, or with `f` replaced by `tr A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HessianConvention {
    Mean,
    Trace,
}

/// Shared per-surface fields consumed by every residual.
pub struct Analysis<'a> {
    pub s: &'a SampledSurface,
    pub d: Differentiator<'a>,
    /// Richardson-extrapolated differentiator for higher-order composites.
    pub d_fine: Differentiator<'a>,
    pub m: usize,
    pub c: f64,
    pub f: ScalarFieldSample,
    pub norm_a2: ScalarFieldSample,
    pub a: TensorField,
    pub grad_f: VectorField,
    pub grad_f2: ScalarFieldSample,
    pub lap_f: ScalarFieldSample,
}

impl<'a> Analysis<'a> {
    pub fn new(s: &'a SampledSurface, order: StencilOrder, richardson: bool) -> Self {
        let grid = s.grid();
        let d = Differentiator::new(grid, order, richardson);
        let d_fine = Differentiator::new(grid, order, true);
        let m = s.dim();
        let f = ScalarFieldSample::new(s.frames.iter().map(|fr| fr.f).collect());
        let norm_a2 = ScalarFieldSample::new(s.frames.iter().map(|fr| fr.norm_a2).collect());
        let a = TensorField::from_nodes(m, &s.frames.iter().map(|fr| fr.a.clone()).collect::<Vec<_>>());
        let (grad_f, grad_f2) = s.geo.grad(&f, &d);
        let lap_f = s.geo.laplace_beltrami(&f, &d);
        Self {
            s,
            d,
            d_fine,
            m,
            c: s.space.c(),
            f,
            norm_a2,
            a,
            grad_f,
            grad_f2,
            lap_f,
        }
    }

    fn n(&self) -> usize {
        self.s.len()
    }

    fn mf(&self) -> f64 {
        self.m as f64
    }

    /// Largest `|grad f|` over reportable nodes.
    pub fn sup_grad_f(&self) -> f64 {
        self.masked_sup(&self.grad_f2).sqrt()
    }

    fn masked_sup(&self, x: &ScalarFieldSample) -> f64 {
        (0..self.n())
            .filter(|&k| self.s.mask[k] && x[k].is_finite())
            .map(|k| x[k].abs())
            .fold(0.0, f64::max)
    }

    fn masked_mean(&self, x: &ScalarFieldSample) -> f64 {
        let v: Vec<f64> = (0..self.n()).filter(|&k| self.s.mask[k]).map(|k| x[k]).collect();
        crate::exec::pairwise_sum(&v) / v.len().max(1) as f64
    }

    fn require_cmc(&self, what: &str) -> Result<()> {
        let g = self.sup_grad_f();
        if !(g < CMC_TOL) {
            return Err(Error::Precondition(format!(
                "{what} needs constant mean curvature, sup|grad f| = {g:.3e}"
            )));
        }
        Ok(())
    }

    fn require_surface(&self, what: &str) -> Result<()> {
        if self.m != 2 {
            return Err(Error::Precondition(format!("{what} needs m = 2, got m = {}", self.m)));
        }
        Ok(())
    }

    fn vec_norm(&self, x: &VectorField) -> ScalarFieldSample {
        self.s.geo.vector_norm2(x).map(f64::sqrt)
    }

    fn combine(&self, x: &VectorField, a: f64, y: &VectorField, b: &ScalarFieldSample) -> VectorField {
        // a·x + b·y
        VectorField {
            comps: x
                .comps
                .iter()
                .zip(&y.comps)
                .map(|(xi, yi)| field(self.n(), |k| a * xi[k] + b[k] * yi[k]))
                .collect(),
        }
    }

    fn scaled(&self, x: &VectorField, s: &ScalarFieldSample) -> VectorField {
        VectorField { comps: x.comps.iter().map(|c| c.zip_with(s, |a, b| a * b)).collect() }
    }

    /// Mean curvature, `|grad f|`, and (curved models) the constraint residual of the points.
    pub fn basics(&self) -> Vec<ResidualField> {
        let space = &self.s.space;
        let frame = field(self.n(), |k| {
            let j = &self.s.jets[k];
            let eta = &self.s.frames[k].eta;
            let mut r = (space.dot(eta.as_slice(), eta.as_slice()) - 1.0).abs();
            for t in &j.d1 {
                let t_norm = space.dot(t.as_slice(), t.as_slice()).abs().sqrt();
                r = r.max((space.dot(eta.as_slice(), t.as_slice()) / t_norm).abs());
            }
            if space.curvature() != 0 {
                r = r.max(space.dot(eta.as_slice(), j.value.as_slice()).abs());
            }
            r
        });
        let manifold = field(self.n(), |k| space.manifold_residual(&self.s.jets[k].value));
        let sym = field(self.n(), |k| {
            let fr = &self.s.frames[k];
            let ga = &fr.g * &fr.a;
            (&ga - ga.transpose()).amax()
        });
        vec![
            ResidualField::unscaled("mean_curvature", self.f.clone()),
            ResidualField::unscaled("grad_f_norm", self.grad_f2.map(f64::sqrt)),
            ResidualField::unscaled("manifold_residual", manifold),
            ResidualField::unscaled("normal_frame", frame),
            ResidualField::unscaled("shape_operator_symmetry", sym),
        ]
    }

    /// `Δf + (|A|² − mc) f` and `|2A(grad f) + m f grad f|`.
    pub fn biharmonic(&self) -> Vec<ResidualField> {
        let (m, c, n) = (self.mf(), self.c, self.n());
        let normal = field(n, |k| self.lap_f[k] + (self.norm_a2[k] - m * c) * self.f[k]);
        let normal_scale = field(n, |k| {
            max_of(&[self.lap_f[k], self.norm_a2[k] * self.f[k], m * c * self.f[k]])
        });
        let a_grad = self.s.geo.apply(&self.a, &self.grad_f);
        let two_a = self.scaled(&a_grad, &ScalarFieldSample::constant(self.s.grid(), 2.0));
        let mf_grad = self.scaled(&self.grad_f, &self.f.map(|f| m * f));
        let tangent = self.vec_norm(&self.combine(&two_a, 1.0, &mf_grad, &ScalarFieldSample::constant(self.s.grid(), 1.0)));
        let (n1, n2) = (self.vec_norm(&two_a), self.vec_norm(&mf_grad));
        vec![
            ResidualField::new("biharmonic_normal", normal, normal_scale),
            ResidualField::new("biharmonic_tangent", tangent, n1.zip_with(&n2, f64::max)),
        ]
    }

    /// `|A(grad f) + (m/2) f grad f|`.
    pub fn biconservative(&self) -> ResidualField {
        let m = self.mf();
        let a_grad = self.s.geo.apply(&self.a, &self.grad_f);
        let half = self.scaled(&self.grad_f, &self.f.map(|f| 0.5 * m * f));
        let one = ScalarFieldSample::constant(self.s.grid(), 1.0);
        let value = self.vec_norm(&self.combine(&a_grad, 1.0, &half, &one));
        let scale = self.vec_norm(&a_grad).zip_with(&self.vec_norm(&half), f64::max);
        ResidualField::new("biconservative", value, scale)
    }

    /// Trace, divergence and norm identities of the stress-bienergy tensor.
    pub fn s2_identities(&self) -> Vec<ResidualField> {
        let (m, n) = (self.mf(), self.n());
        let geo = &self.s.geo;
        let s2: Vec<DMatrix<f64>> = self.s.frames.iter().map(stress_bienergy).collect();
        let s2_field = TensorField::from_nodes(self.m, &s2);

        let trace_rhs = |k: usize| m * m * self.f[k] * self.f[k] * (2.0 - 0.5 * m);
        let trace = field(n, |k| s2[k].trace() - trace_rhs(k));
        let trace_scale = field(n, |k| max_of(&[s2[k].trace(), trace_rhs(k)]));

        // Div S₂ directly, against −(m²/2) d(f²) + 2m Div(fA) with
        // Div(fA)_k = A^i_k ∂_i f + f (Div A)_k, Richardson-extrapolated.
        let lhs = geo.divergence_op(&s2_field, &self.d_fine);
        let df2 = self.d_fine.gradient_components(&self.f.map(|f| f * f));
        let df = self.d_fine.gradient_components(&self.f);
        let div_a = geo.divergence_op(&self.a, &self.d_fine);
        let mm = self.m;
        let rhs: Vec<ScalarFieldSample> = (0..mm)
            .map(|kk| {
                field(n, |k| {
                    let a_df: f64 = (0..mm).map(|i| self.a.comps[i * mm + kk][k] * df[i][k]).sum();
                    -0.5 * m * m * df2[kk][k] + 2.0 * m * (a_df + self.f[k] * div_a[kk][k])
                })
            })
            .collect();
        let diff: Vec<ScalarFieldSample> =
            (0..mm).map(|kk| lhs[kk].zip_with(&rhs[kk], |a, b| a - b)).collect();
        let div = geo.covector_norm2(&diff).map(f64::sqrt);
        let div_scale = geo
            .covector_norm2(&lhs)
            .zip_with(&geo.covector_norm2(&rhs), f64::max)
            .map(f64::sqrt);

        let norm_rhs = |k: usize| {
            let f = self.f[k];
            m.powi(4) * f.powi(4) * (0.25 * m - 2.0) + 4.0 * m * m * f * f * self.norm_a2[k]
        };
        let norm_lhs = |k: usize| (&s2[k] * &s2[k]).trace();
        let norm = field(n, |k| norm_lhs(k) - norm_rhs(k));
        let norm_scale = field(n, |k| max_of(&[norm_lhs(k), norm_rhs(k)]));

        vec![
            ResidualField::new("s2_trace", trace, trace_scale),
            ResidualField::new("s2_divergence", div, div_scale),
            ResidualField::new("s2_norm", norm, norm_scale),
        ]
    }

    /// Gaussian curvature from the metric alone: the conformal-factor formula
    /// on isothermal charts, Brioschi otherwise.
    pub fn intrinsic_curvature(&self, isothermal: bool) -> Result<ScalarFieldSample> {
        self.require_surface("intrinsic curvature")?;
        Ok(if isothermal {
            self.s.geo.gaussian_curvature_conformal(&self.d_fine)
        } else {
            self.s.geo.gaussian_curvature_brioschi(&self.d_fine)
        })
    }

    /// Gauss equation `K = det A + c`, with `K` from the metric alone.
    pub fn gauss_equation(&self, k_int: &ScalarFieldSample) -> ResidualField {
        let n = self.n();
        let det = field(n, |k| self.s.frames[k].lambda.iter().product::<f64>());
        let value = field(n, |k| k_int[k] - det[k] - self.c);
        let scale = field(n, |k| max_of(&[k_int[k], det[k], self.c]));
        ResidualField::new("gauss_equation", value, scale)
    }

    /// The three intrinsic laws of non-CMC biconservative surfaces:
    /// `K = −3f² + c`, the level-curve curvature `3|grad K| / (8(c − K))`,
    /// and `(c − K)ΔK − |grad K|² − (8/3)K(c − K)² = 0`.
    ///
    /// The first uses `K` from the metric alone; the other two use
    /// `K = det A + c`, which needs no differentiation. Returns the fields and
    /// the number of nodes left out of the level-curve law.
    pub fn surface_invariants(&self, k_int: &ScalarFieldSample) -> Result<(Vec<ResidualField>, usize)> {
        self.require_surface("intrinsic invariants")?;
        let (c, n) = (self.c, self.n());
        let geo = &self.s.geo;
        let k_ext = field(n, |k| self.s.frames[k].lambda.iter().product::<f64>() + c);
        let (grad_k, grad_k2) = geo.grad(&k_ext, &self.d);
        let sup = self.masked_sup(&grad_k2).sqrt();
        if !(sup > GRAD_K_MIN) {
            return Err(Error::Precondition(format!(
                "curvature is constant (sup|grad K| = {sup:.3e}); level curves undefined"
            )));
        }
        let curvature = field(n, |k| k_int[k] + 3.0 * self.f[k] * self.f[k] - c);
        let curvature_scale = field(n, |k| max_of(&[k_int[k], 3.0 * self.f[k] * self.f[k], c]));

        let gk = grad_k2.map(f64::sqrt);
        let unit = VectorField {
            comps: grad_k
                .comps
                .iter()
                .map(|comp| field(n, |k| if gk[k] > GRAD_K_MIN { comp[k] / gk[k] } else { f64::NAN }))
                .collect(),
        };
        let kappa = geo.divergence_vec(&unit, &self.d).map(f64::abs);
        let law = field(n, |k| 3.0 * gk[k] / (8.0 * (c - k_ext[k])));
        let level = kappa.zip_with(&law, |a, b| a - b);
        let level_scale = kappa.zip_with(&law, |a, b| max_of(&[a, b]));
        let dropped = (0..n).filter(|&k| self.s.mask[k] && !(gk[k] > GRAD_K_MIN)).count();

        let lap_k = geo.laplace_beltrami(&k_ext, &self.d_fine);
        let terms = |k: usize| {
            let ck = c - k_ext[k];
            [ck * lap_k[k], grad_k2[k], 8.0 / 3.0 * k_ext[k] * ck * ck]
        };
        let pde = field(n, |k| {
            let t = terms(k);
            t[0] - t[1] - t[2]
        });
        let pde_scale = field(n, |k| max_of(&terms(k)));
        Ok((
            vec![
                ResidualField::new("cmop_curvature", curvature, curvature_scale),
                ResidualField::new("cmop_level_curves", level, level_scale),
                ResidualField::new("cmop_pde", pde, pde_scale),
            ],
            dropped,
        ))
    }

    /// `min(|3λ₁ + λ₂|, |λ₁ + 3λ₂|)`, insensitive to ordering and orientation.
    pub fn weingarten(&self) -> Result<ResidualField> {
        self.require_surface("linear Weingarten check")?;
        let n = self.n();
        let value = field(n, |k| {
            let l = &self.s.frames[k].lambda;
            (3.0 * l[0] + l[1]).abs().min((l[0] + 3.0 * l[1]).abs())
        });
        let scale = field(n, |k| {
            let l = &self.s.frames[k].lambda;
            3.0 * max_of(l)
        });
        Ok(ResidualField::new("weingarten", value, scale))
    }

    /// `|∇A|²`, computed once per differentiator.
    pub fn nabla_a2(&self, d: &Differentiator) -> ScalarFieldSample {
        self.s.geo.covariant_derivative(&self.a, d).1
    }

    /// `|grad f|²` with the given differentiator.
    pub fn grad_f2_with(&self, d: &Differentiator) -> ScalarFieldSample {
        self.s.geo.grad(&self.f, d).1
    }

    /// `|∇A|² − m²(m+26)/(4(m−1)) |grad f|²`, signed. Both inputs should come
    /// from the same differentiator, since the margin vanishes on equality cases.
    pub fn chen_margin(&self, nabla_a2: &ScalarFieldSample, grad_f2: &ScalarFieldSample) -> ResidualField {
        let m = self.mf();
        let coef = m * m * (m + 26.0) / (4.0 * (m - 1.0));
        let value = nabla_a2.zip_with(grad_f2, |a, g| a - coef * g);
        let scale = nabla_a2.zip_with(grad_f2, |a, g| max_of(&[a, coef * g]));
        ResidualField::new("chen_margin", value, scale)
    }

    /// `½Δ|A|² = −|∇A|² − m div(A grad f) + m²|grad f|² − ½ Σ (λᵢ−λⱼ)²(c + λᵢλⱼ)`,
    /// all derivatives Richardson-extrapolated.
    pub fn simons(&self) -> Result<ResidualField> {
        if !(2..=3).contains(&self.m) {
            return Err(Error::Precondition(format!("Simons check supports m = 2, 3, got {}", self.m)));
        }
        let (m, c, n) = (self.mf(), self.c, self.n());
        let geo = &self.s.geo;
        let d = &self.d_fine;
        let lhs = geo.laplace_beltrami(&self.norm_a2, d).map(|x| 0.5 * x);
        let nabla = self.nabla_a2(d);
        let (grad_f, grad_f2) = geo.grad(&self.f, d);
        let div_ag = geo.divergence_vec(&geo.apply(&self.a, &grad_f), d);
        let curv = field(n, |k| {
            let l = &self.s.frames[k].lambda;
            let mut s = 0.0;
            for i in 0..l.len() {
                for j in 0..l.len() {
                    s += (l[i] - l[j]).powi(2) * (c + l[i] * l[j]);
                }
            }
            0.5 * s
        });
        let terms = |k: usize| [lhs[k], nabla[k], m * div_ag[k], m * m * grad_f2[k], curv[k]];
        let value = field(n, |k| {
            let t = terms(k);
            t[0] + t[1] + t[2] - t[3] + t[4]
        });
        let scale = field(n, |k| max_of(&terms(k)));
        Ok(ResidualField::new("simons", value, scale))
    }

    /// Scalar curvature `s = m²f² − |A|² + m(m−1)c`.
    pub fn scalar_curvature(&self) -> ScalarFieldSample {
        let (m, c) = (self.mf(), self.c);
        self.f.zip_with(&self.norm_a2, |f, a2| m * m * f * f - a2 + m * (m - 1.0) * c)
    }

    /// CMC reduction `4f²{cm²f² − mf tr A³ − |A|²(cm − |A|²) − |∇A|²} = 0`.
    pub fn deltaf4(&self, nabla_a2: &ScalarFieldSample) -> Result<ResidualField> {
        self.require_cmc("the reduced Simons identity")?;
        let (_, grad_s2) = self.s.geo.grad(&self.scalar_curvature(), &self.d);
        let gs = self.masked_sup(&grad_s2).sqrt();
        if !(gs < CMC_TOL) {
            return Err(Error::Precondition(format!(
                "the reduced Simons identity needs constant scalar curvature, sup|grad s| = {gs:.3e}"
            )));
        }
        let (m, c, n) = (self.mf(), self.c, self.n());
        let terms = |k: usize| {
            let f = self.f[k];
            let a2 = self.norm_a2[k];
            let w = 4.0 * f * f;
            [
                w * c * m * m * f * f,
                w * m * f * self.s.frames[k].trace_a3(),
                w * a2 * (c * m - a2),
                w * nabla_a2[k],
            ]
        };
        let value = field(n, |k| {
            let t = terms(k);
            t[0] - t[1] - t[2] - t[3]
        });
        let scale = field(n, |k| max_of(&terms(k)));
        Ok(ResidualField::new("deltaf4", value, scale))
    }

    /// `m F ΔF − 3m|grad F|² − 2<A, Hess F>` with `F = f` or `F = m f`.
    pub fn hessian_identity(&self, convention: HessianConvention) -> ResidualField {
        let (m, n) = (self.mf(), self.n());
        let k = match convention {
            HessianConvention::Mean => 1.0,
            HessianConvention::Trace => m,
        };
        let geo = &self.s.geo;
        let hess = geo.hessian(&self.f, &self.d);
        // <A, Hess f> = A^i_j g^{jl} Hess_li
        let inner = field(n, |node| (self.a.at(node) * &geo.g_inv[node] * hess.at(node)).trace());
        let terms = |node: usize| {
            [
                m * k * k * self.f[node] * self.lap_f[node],
                3.0 * m * k * k * self.grad_f2[node],
                2.0 * k * inner[node],
            ]
        };
        let value = field(n, |node| {
            let t = terms(node);
            t[0] - t[1] - t[2]
        });
        let scale = field(n, |node| max_of(&terms(node)));
        ResidualField::new("hessian_identity", value, scale)
    }

    /// Spectral decomposition of the position vector of a CMC proper-biharmonic
    /// hypersurface of the unit sphere.
    pub fn finite_type(&self) -> Result<Vec<ResidualField>> {
        if self.s.space.curvature() != 1 {
            return Err(Error::Precondition("finite-type check needs the unit sphere as ambient".into()));
        }
        self.require_cmc("finite-type check")?;
        let h = self.masked_mean(&self.f.map(f64::abs));
        if !(h > 1e-8 && h <= 1.0 + 1e-6) {
            return Err(Error::Precondition(format!("|H| = {h:.6e} outside (0, 1]")));
        }
        let (m, n) = (self.mf(), self.n());
        let dim = self.s.space.embedding_dim();
        let geo = &self.s.geo;
        let one_type = (h - 1.0).abs() <= 1e-6;
        // H = f η; ψ± = ½ψ ± H/(2|H|), or ½ψ ± H/2 when |H| = 1
        let denom = if one_type { 1.0 } else { h };
        let part = |sign: f64| -> Vec<ScalarFieldSample> {
            (0..dim)
                .map(|a| {
                    field(n, |k| {
                        let fr = &self.s.frames[k];
                        0.5 * self.s.jets[k].value[a] + sign * fr.f * fr.eta[a] / (2.0 * denom)
                    })
                })
                .collect()
        };
        let (plus, minus) = (part(1.0), part(-1.0));
        let residual = |name: &str, comps: &[ScalarFieldSample], eig: f64| {
            let laps: Vec<ScalarFieldSample> =
                comps.iter().map(|c| geo.laplace_beltrami(c, &self.d_fine)).collect();
            // Euclidean norms in the embedding space, so the entry is invariant under rotations
            let norm = |g: &dyn Fn(usize) -> f64| (0..dim).map(|a| g(a).powi(2)).sum::<f64>().sqrt();
            let value = field(n, |k| norm(&|a| laps[a][k] - eig * comps[a][k]));
            let scale = field(n, |k| norm(&|a| laps[a][k]).max(norm(&|a| eig * comps[a][k])));
            ResidualField::new(name, value, scale)
        };
        let (first, second) = if one_type {
            (residual("finite_type_t0", &plus, 0.0), residual("finite_type_t1", &minus, 2.0 * m))
        } else {
            (
                residual("finite_type_t1", &plus, m * (1.0 - h)),
                residual("finite_type_t2", &minus, m * (1.0 + h)),
            )
        };
        let norm = |c: &[ScalarFieldSample], k: usize| (0..dim).map(|a| c[a][k] * c[a][k]).sum::<f64>().sqrt();
        let norms = field(n, |k| {
            (norm(&plus, k) - std::f64::consts::FRAC_1_SQRT_2)
                .abs()
                .max((norm(&minus, k) - std::f64::consts::FRAC_1_SQRT_2).abs())
        });
        let orth = field(n, |k| (0..dim).map(|a| plus[a][k] * minus[a][k]).sum());
        Ok(vec![
            first,
            second,
            ResidualField::unscaled("finite_type_norms", norms),
            ResidualField::unscaled("finite_type_orthogonality", orth),
        ])
    }

    /// Distance of `|H|` from the admissible set `(0, (m−2)/m] ∪ {1}` for
    /// CMC proper-biharmonic hypersurfaces of the sphere.
    pub fn cmc_gap(&self) -> Result<ResidualField> {
        self.require_cmc("the CMC gap report")?;
        let h = self.masked_mean(&self.f.map(f64::abs));
        if !(h > 1e-8) {
            return Err(Error::Precondition(format!("minimal hypersurface (|H| = {h:.3e}) is not proper")));
        }
        let edge = (self.mf() - 2.0) / self.mf();
        let value = self.f.map(|f| {
            let h = f.abs();
            if h > 0.0 && h <= edge {
                0.0
            } else {
                (h - edge).abs().min((h - 1.0).abs())
            }
        });
        Ok(ResidualField::unscaled("cmc_gap", value))
    }

    /// Cauchy–Riemann residual of the Hopf function.
    pub fn hopf(&self) -> Result<ResidualField> {
        let hf = hopf_function(&self.s.geo, &self.s.frames, &self.d)?;
        Ok(ResidualField::unscaled("hopf_cr", hf.cr_residual))
    }
}

/// The CMC-reduced identity evaluated on exact principal curvatures.
pub fn deltaf4_closed_form(c: f64, lambda: &[f64]) -> f64 {
    let m = lambda.len() as f64;
    let f = lambda.iter().sum::<f64>() / m;
    let a2: f64 = lambda.iter().map(|l| l * l).sum();
    let a3: f64 = lambda.iter().map(|l| l * l * l).sum();
    4.0 * f * f * (c * m * m * f * f - m * f * a3 - a2 * (c * m - a2))
}
