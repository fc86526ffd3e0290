//! Constructors of the catalog families.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CatalogEntry, Claim, ClosedForm, Params};
use crate::ambient::AmbientSpace;
use crate::calculus::{Axis, ChartGrid, FnChart};
use crate::error::{Error, Result};
use crate::profile_ode::{assemble_surface, reconstruct_sigma};
use crate::residuals::{Basis, Comparison, Measure};
use crate::surface::Surface;

/// Polar caps cut from angular coordinates.
const CAP: f64 = 0.35;
const MARGIN: usize = 2;

fn counts(m: usize) -> usize {
    if m == 2 {
        65
    } else {
        33
    }
}

fn below(name: &str, entry: &str, measure: Measure, tol: f64, basis: Basis) -> Claim {
    Claim::new(name, entry, measure, Comparison::Below, tol, basis)
}

fn above(name: &str, entry: &str, measure: Measure, tol: f64, basis: Basis) -> Claim {
    Claim::new(name, entry, measure, Comparison::Above, tol, basis)
}

fn on_manifold(tol: f64) -> Claim {
    below("on_manifold", "manifold_residual", Measure::MaxAbs, tol, Basis::Definitional)
}

fn biharmonic_claims(basis: Basis) -> Vec<Claim> {
    vec![
        below("biharmonic_normal", "biharmonic_normal", Measure::MaxRel, 1e-6, basis),
        below("biharmonic_tangent", "biharmonic_tangent", Measure::MaxRel, 1e-6, basis),
    ]
}

fn s2_claims(div_tol: f64) -> Vec<Claim> {
    vec![
        below("s2_trace", "s2_trace", Measure::MaxAbs, 1e-8, Basis::Published),
        below("s2_norm", "s2_norm", Measure::MaxAbs, 1e-8, Basis::Published),
        below("s2_divergence", "s2_divergence", Measure::MaxAbs, div_tol, Basis::Published),
    ]
}

fn closed_form_claims(cf: &ClosedForm, m: usize) -> Vec<Claim> {
    let mut out = Vec::new();
    if cf.principal_curvatures.is_some() {
        out.push(below(
            "closed_form_mean_curvature",
            "closed_form_mean_curvature",
            Measure::MaxAbs,
            1e-8,
            Basis::Derived,
        ));
        out.push(below(
            "closed_form_principal_curvatures",
            "closed_form_principal_curvatures",
            Measure::MaxAbs,
            1e-8,
            Basis::Derived,
        ));
    }
    if cf.metric.is_some() {
        out.push(below("closed_form_metric", "closed_form_metric", Measure::MaxAbs, 1e-8, Basis::Derived));
    }
    if cf.gauss_curvature.is_some() && m == 2 {
        out.push(below(
            "closed_form_gauss_curvature",
            "closed_form_gauss_curvature",
            Measure::MaxAbs,
            1e-6,
            Basis::Derived,
        ));
    }
    out
}

/// Claims shared by every CMC entry with closed-form principal curvatures.
fn cmc_claims() -> Vec<Claim> {
    let mut out = vec![
        below("cmc", "grad_f_norm", Measure::MaxAbs, 1e-8, Basis::Definitional),
        below("biconservative", "biconservative", Measure::MaxRel, 1e-6, Basis::Published),
        below("deltaf4", "deltaf4", Measure::MaxRel, 1e-6, Basis::Derived),
        below("deltaf4_closed_form", "deltaf4_closed_form", Measure::MaxAbs, 1e-12, Basis::Derived),
    ];
    out.extend(s2_claims(1e-8));
    out
}

fn finite_type_claims(one_type: bool) -> Vec<Claim> {
    let names: &[&str] = if one_type {
        &["finite_type_t0", "finite_type_t1"]
    } else {
        &["finite_type_t1", "finite_type_t2"]
    };
    let mut out: Vec<Claim> = names
        .iter()
        .map(|n| below(n, n, Measure::MaxAbs, 1e-5, Basis::Published))
        .collect();
    out.push(below("finite_type_norms", "finite_type_norms", Measure::MaxAbs, 1e-8, Basis::Derived));
    out.push(below(
        "finite_type_orthogonality",
        "finite_type_orthogonality",
        Measure::MaxAbs,
        1e-8,
        Basis::Derived,
    ));
    out.push(below("cmc_gap", "cmc_gap", Measure::MaxAbs, 1e-8, Basis::Published));
    out
}

/// Point of the round unit sphere `S^k` in angular coordinates, and the
/// diagonal of its metric. `k = 1`: `(u)`; `k = 2`: `(θ, φ)`; `k = 3`: `(χ, θ, φ)`.
fn unit_sphere(k: usize, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    match k {
        1 => (vec![x[0].cos(), x[0].sin()], vec![1.0]),
        2 => {
            let (t, p) = (x[0], x[1]);
            (vec![t.sin() * p.cos(), t.sin() * p.sin(), t.cos()], vec![1.0, t.sin().powi(2)])
        }
        3 => {
            let (c, t, p) = (x[0], x[1], x[2]);
            let sc = c.sin();
            (
                vec![sc * t.sin() * p.cos(), sc * t.sin() * p.sin(), sc * t.cos(), c.cos()],
                vec![1.0, sc * sc, (sc * t.sin()).powi(2)],
            )
        }
        _ => unreachable!("sphere factors have dimension 1..=3"),
    }
}

fn sphere_axes(k: usize) -> Vec<Axis> {
    let n = counts(k.max(2));
    match k {
        1 => vec![Axis::periodic(0.0, TAU, n)],
        2 => vec![Axis::closed(CAP, PI - CAP, n), Axis::periodic(0.0, TAU, n)],
        _ => vec![
            Axis::closed(CAP, PI - CAP, n),
            Axis::closed(CAP, PI - CAP, n),
            Axis::periodic(0.0, TAU, n),
        ],
    }
}

fn product_axes(m1: usize, m2: usize) -> Vec<Axis> {
    let n = counts(m1 + m2);
    let fix = |a: Axis| Axis { count: n, ..a };
    sphere_axes(m1).into_iter().chain(sphere_axes(m2)).map(fix).collect()
}

fn diag(d: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_row_slice(d))
}

fn sphere_dim(p: &Params, key: &str, allowed: &[usize]) -> Result<usize> {
    let m = p.get(key) as usize;
    if !allowed.contains(&m) {
        return Err(Error::Input(format!("{key} must be one of {allowed:?}, got {m}")));
    }
    Ok(m)
}

/// `S^m(r) ⊂ S^{m+1}`, at height `√(1 − r²)`.
pub(super) fn small_hypersphere(p: &Params) -> Result<CatalogEntry> {
    let m = sphere_dim(p, "m", &[2, 3])?;
    let r = p.get("r");
    let h = (1.0 - r * r).sqrt();
    let chart = FnChart::new(m, m + 2, move |x: &[f64]| {
        let (w, _) = unit_sphere(m, x);
        let mut v: Vec<f64> = w.iter().map(|c| r * c).collect();
        v.push(h);
        DVector::from_vec(v)
    });
    let grid = ChartGrid::new(sphere_axes(m), MARGIN)?;
    let surface = Surface::new("small_hypersphere", AmbientSpace::sphere(m + 1), Arc::new(chart), grid)?;
    let k = h / r;
    let cf = ClosedForm {
        principal_curvatures: Some(Arc::new(move |_| vec![k; m])),
        metric: Some(Arc::new(move |x| diag(&unit_sphere(m, x).1.iter().map(|g| r * r * g).collect::<Vec<_>>()))),
        gauss_curvature: (m == 2).then(|| Arc::new(move |_: &[f64]| 1.0 / (r * r)) as _),
    };
    let mut claims = vec![on_manifold(1e-9)];
    claims.extend(biharmonic_claims(Basis::Published));
    claims.extend(closed_form_claims(&cf, m));
    claims.extend(cmc_claims());
    if (r - FRAC_1_SQRT_2).abs() < 1e-12 {
        claims.extend(finite_type_claims(true));
    }
    let notes = vec![format!("principal curvatures √(1−r²)/r = {k} for the normal with f ≥ 0")];
    CatalogEntry::assemble(surface, m, p.clone(), claims, cf, notes)
}

fn product(id: &str, m1: usize, m2: usize, r1: f64, p: &Params, biharmonic: bool) -> Result<CatalogEntry> {
    let m = m1 + m2;
    if m > 3 {
        return Err(Error::Input(format!("m1 + m2 must be at most 3, got {m}")));
    }
    let r2 = (1.0 - r1 * r1).sqrt();
    let chart = FnChart::new(m, m + 2, move |x: &[f64]| {
        let (a, _) = unit_sphere(m1, &x[..m1]);
        let (b, _) = unit_sphere(m2, &x[m1..]);
        DVector::from_vec(a.iter().map(|c| r1 * c).chain(b.iter().map(|c| r2 * c)).collect())
    });
    let grid = ChartGrid::new(product_axes(m1, m2), MARGIN)?;
    let mut surface = Surface::new(id, AmbientSpace::sphere(m + 1), Arc::new(chart), grid)?;
    let equal_radii = (r1 - FRAC_1_SQRT_2).abs() < 1e-15;
    surface.isothermal = m == 2 && equal_radii;
    // λ = r2/r1 on the first factor, −r1/r2 on the second; flipped if that makes f < 0
    let (a, b) = (r2 / r1, -r1 / r2);
    let f = (m1 as f64 * a + m2 as f64 * b) / m as f64;
    let s = if f < 0.0 { -1.0 } else { 1.0 };
    let mut lam: Vec<f64> = std::iter::repeat_n(s * a, m1).chain(std::iter::repeat_n(s * b, m2)).collect();
    lam.sort_by(|x, y| y.total_cmp(x));
    let cf = ClosedForm {
        principal_curvatures: Some(Arc::new(move |_| lam.clone())),
        metric: Some(Arc::new(move |x| {
            let ga = unit_sphere(m1, &x[..m1]).1.into_iter().map(|g| r1 * r1 * g);
            let gb = unit_sphere(m2, &x[m1..]).1.into_iter().map(|g| r2 * r2 * g);
            diag(&ga.chain(gb).collect::<Vec<_>>())
        })),
        gauss_curvature: (m == 2).then(|| Arc::new(|_: &[f64]| 0.0) as _),
    };
    let mut claims = vec![on_manifold(1e-9)];
    if biharmonic {
        claims.extend(biharmonic_claims(Basis::Published));
        if m1 == m2 {
            claims.push(below("minimal", "mean_curvature", Measure::MaxAbs, 1e-10, Basis::Derived));
            claims.push(below("harmonic_normal", "biharmonic_normal", Measure::MaxAbs, 1e-8, Basis::Derived));
            claims.push(below("harmonic_tangent", "biharmonic_tangent", Measure::MaxAbs, 1e-8, Basis::Derived));
        } else {
            claims.extend(finite_type_claims(false));
        }
    }
    if surface.isothermal {
        claims.push(below("hopf_cr", "hopf_cr", Measure::MaxAbs, 1e-5, Basis::Published));
    }
    claims.extend(closed_form_claims(&cf, m));
    claims.extend(cmc_claims());
    let notes = vec![format!(
        "radii r1 = {r1}, r2 = {r2}; principal curvatures {a} (x{m1}) and {b} (x{m2}) up to a common sign fixed by f ≥ 0"
    )];
    CatalogEntry::assemble(surface, m, p.clone(), claims, cf, notes)
}

/// `S^{m1}(1/√2) × S^{m2}(1/√2) ⊂ S^{m1+m2+1}`.
pub(super) fn clifford_product(p: &Params) -> Result<CatalogEntry> {
    let m1 = sphere_dim(p, "m1", &[1, 2])?;
    let m2 = sphere_dim(p, "m2", &[1, 2])?;
    product("clifford_product", m1, m2, FRAC_1_SQRT_2, p, true)
}

/// `S^{m1}(r1) × S^{m2}(√(1 − r1²)) ⊂ S^{m1+m2+1}`.
pub(super) fn product_general(p: &Params) -> Result<CatalogEntry> {
    let m1 = sphere_dim(p, "m1", &[1, 2])?;
    let m2 = sphere_dim(p, "m2", &[1, 2])?;
    product("product_general", m1, m2, p.get("r1"), p, false)
}

/// Cone `(u cos v, u sin v, αu)` in the isothermal parameter `u = exp(s/√(1+α²))`.
pub(super) fn cone_r3(p: &Params) -> Result<CatalogEntry> {
    let alpha = p.get("alpha");
    let q = (1.0 + alpha * alpha).sqrt();
    let chart = FnChart::new(2, 3, move |x: &[f64]| {
        let u = (x[0] / q).exp();
        DVector::from_vec(vec![u * x[1].cos(), u * x[1].sin(), alpha * u])
    });
    let grid = ChartGrid::new(vec![Axis::closed(-1.0, 1.0, 65), Axis::periodic(0.0, TAU, 65)], MARGIN)?;
    let mut surface = Surface::new("cone_r3", AmbientSpace::euclidean(3), Arc::new(chart), grid)?;
    surface.isothermal = true;
    let cf = ClosedForm {
        principal_curvatures: Some(Arc::new(move |x| vec![alpha / ((x[0] / q).exp() * q), 0.0])),
        metric: Some(Arc::new(move |x| DMatrix::identity(2, 2) * (2.0 * x[0] / q).exp())),
        gauss_curvature: Some(Arc::new(|_| 0.0)),
    };
    let mut claims = vec![
        on_manifold(1e-9),
        below("hopf_cr", "hopf_cr", Measure::MaxAbs, 1e-5, Basis::Published),
        above("non_cmc", "grad_f_norm", Measure::Max, 1e-2, Basis::Published),
    ];
    claims.extend(closed_form_claims(&cf, 2));
    claims.extend(s2_claims(1e-4));
    let notes = vec!["isothermal parameter s with u = exp(s/√(1+α²)); metric u²(ds² + dv²)".into()];
    CatalogEntry::assemble(surface, 2, p.clone(), claims, cf, notes)
}

/// Cone-like surface of `S³` with Gaussian curvature 1, in isothermal coordinates
/// `(u, w)` with `v = atan(sinh(w/α))`.
pub(super) fn cone_s3(p: &Params) -> Result<CatalogEntry> {
    let alpha = p.get("alpha");
    let b = (alpha * alpha - 1.0).sqrt();
    let chart = FnChart::new(2, 4, move |x: &[f64]| {
        let (u, v) = (x[0], (x[1] / alpha).sinh().atan());
        let cv = v.cos() / alpha;
        DVector::from_vec(vec![u.cos() * cv, u.sin() * cv, b * cv, v.sin()])
    });
    let grid = ChartGrid::new(vec![Axis::periodic(0.0, TAU, 65), Axis::closed(-1.5, 1.5, 65)], MARGIN)?;
    let mut surface = Surface::new("cone_s3", AmbientSpace::sphere(3), Arc::new(chart), grid)?;
    surface.isothermal = true;
    let cf = ClosedForm {
        principal_curvatures: None,
        metric: Some(Arc::new(move |x| {
            DMatrix::identity(2, 2) * ((x[1] / alpha).cosh().powi(-2) / (alpha * alpha))
        })),
        gauss_curvature: Some(Arc::new(|_| 1.0)),
    };
    let mut claims = vec![
        on_manifold(1e-9),
        below("hopf_cr", "hopf_cr", Measure::MaxAbs, 1e-5, Basis::Published),
        above("non_cmc", "grad_f_norm", Measure::Max, 1e-2, Basis::Published),
    ];
    claims.extend(closed_form_claims(&cf, 2));
    claims.extend(s2_claims(1e-4));
    let notes = vec!["isothermal coordinates (u, w), v = atan(sinh(w/α)); metric sech²(w/α)/α² (du² + dw²)".into()];
    CatalogEntry::assemble(surface, 2, p.clone(), claims, cf, notes)
}

/// Non-CMC biconservative surface of `R³` with metric `C₀ cosh⁶u (du² + dv²)`.
pub(super) fn bicons_r3(p: &Params) -> Result<CatalogEntry> {
    bicons_r3_on(p, 65)
}

pub(super) fn bicons_r3_on(p: &Params, n: usize) -> Result<CatalogEntry> {
    let c0 = p.get("C0");
    let sq = c0.sqrt();
    let chart = FnChart::new(2, 3, move |x: &[f64]| {
        let (u, v) = (x[0], x[1]);
        let s1 = sq / 3.0 * u.cosh().powi(3);
        let s2 = sq / 2.0 * (0.5 * (2.0 * u).sinh() + u);
        DVector::from_vec(vec![s1 * (3.0 * v).cos(), s1 * (3.0 * v).sin(), s2])
    });
    let grid = ChartGrid::new(vec![Axis::closed(-1.0, 1.0, n), Axis::periodic(0.0, TAU / 3.0, n)], MARGIN)?;
    let mut surface = Surface::new("bicons_r3", AmbientSpace::euclidean(3), Arc::new(chart), grid)?;
    surface.isothermal = true;
    let cf = ClosedForm {
        principal_curvatures: Some(Arc::new(move |x| {
            let k = 1.0 / (sq * x[0].cosh().powi(4));
            vec![3.0 * k, -k]
        })),
        metric: Some(Arc::new(move |x| DMatrix::identity(2, 2) * (c0 * x[0].cosh().powi(6)))),
        gauss_curvature: Some(Arc::new(move |x| -3.0 / (c0 * x[0].cosh().powi(8)))),
    };
    let mut claims = vec![on_manifold(1e-9)];
    claims.extend(closed_form_claims(&cf, 2));
    claims.extend([
        below("biconservative", "biconservative", Measure::MaxRel, 1e-6, Basis::Published),
        below("weingarten", "weingarten", Measure::MaxAbs, 1e-6, Basis::Published),
        above("chen_margin", "chen_margin", Measure::Min, -1e-6, Basis::Published),
        below("hessian_identity", "hessian_identity", Measure::MaxRel, 1e-4, Basis::Published),
        below("simons", "simons", Measure::MaxRel, 1e-3, Basis::Published),
        below("cmop_curvature", "cmop_curvature", Measure::MaxRel, 1e-4, Basis::Published),
        below("cmop_pde", "cmop_pde", Measure::MaxRel, 1e-3, Basis::Published),
        above("non_cmc", "grad_f_norm", Measure::Max, 1e-2, Basis::Published),
        above("positive_mean_curvature", "mean_curvature", Measure::Min, 0.0, Basis::Derived),
    ]);
    claims.extend(s2_claims(1e-4));
    let notes = vec!["principal curvatures 3/(√C0 cosh⁴u) and −1/(√C0 cosh⁴u)".into()];
    CatalogEntry::assemble(surface, 2, p.clone(), claims, cf, notes)
}

/// Standard non-CMC biconservative surface of `S³` built from the profile ODE.
pub(super) fn bicons_s3(p: &Params) -> Result<CatalogEntry> {
    let c1 = p.get("c1");
    let tol = 1e-10;
    let sol = reconstruct_sigma(c1, 10, 128, tol)?;
    let period = sol.period.expect("period detected");
    let chart = assemble_surface(&sol)?;
    let grid = ChartGrid::new(
        vec![Axis::closed(0.05 * period, 0.45 * period, 65), Axis::periodic(0.0, TAU, 65)],
        MARGIN,
    )?;
    let surface = Surface::new("bicons_s3", AmbientSpace::sphere(3), Arc::new(chart), grid)?;
    let mut claims = vec![
        on_manifold(1e-8),
        below("ode_first_integral_drift", "ode_first_integral_drift", Measure::MaxAbs, 1e-8, Basis::Derived),
        below("ode_period_agreement", "ode_period_agreement", Measure::MaxAbs, 1e-8, Basis::Derived),
        below("ode_band_excess", "ode_band_excess", Measure::MaxAbs, 1e-9, Basis::Derived),
        below("ode_constraint", "ode_constraint", Measure::MaxAbs, 1e-6, Basis::Derived),
        below("biconservative", "biconservative", Measure::MaxRel, 1e-4, Basis::Published),
        below("cmop_curvature", "cmop_curvature", Measure::MaxRel, 1e-4, Basis::Published),
        below("cmop_pde", "cmop_pde", Measure::MaxRel, 1e-3, Basis::Published),
        above("positive_mean_curvature", "mean_curvature", Measure::Min, 0.0, Basis::Published),
        above("non_cmc", "grad_f_norm", Measure::Max, 1e-2, Basis::Published),
    ];
    claims.extend(s2_claims(1e-4));
    let notes = vec![format!(
        "profile ODE at tol {tol:e} over 10 periods; period {period:.15}; chart on u ∈ [0.05, 0.45]·period"
    )];
    let mut entry = CatalogEntry::assemble(surface, 2, p.clone(), claims, ClosedForm::default(), notes)?;
    entry.constants = vec![
        ("ode_first_integral_drift".into(), sol.max_drift()),
        ("ode_period_agreement".into(), sol.period_spread()),
        ("ode_band_excess".into(), sol.band_excess()),
        ("ode_constraint".into(), sol.constraint_max()),
    ];
    Ok(entry)
}

/// Round sphere `S²(r) ⊂ R³`; fails the linear Weingarten relation.
pub(super) fn round_sphere(p: &Params) -> Result<CatalogEntry> {
    let r = p.get("r");
    let chart = FnChart::new(2, 3, move |x: &[f64]| {
        DVector::from_vec(unit_sphere(2, x).0.into_iter().map(|c| r * c).collect())
    });
    let grid = ChartGrid::new(sphere_axes(2), MARGIN)?;
    let surface = Surface::new("round_sphere", AmbientSpace::euclidean(3), Arc::new(chart), grid)?;
    let cf = ClosedForm {
        principal_curvatures: Some(Arc::new(move |_| vec![1.0 / r; 2])),
        metric: Some(Arc::new(move |x| diag(&unit_sphere(2, x).1.iter().map(|g| r * r * g).collect::<Vec<_>>()))),
        gauss_curvature: Some(Arc::new(move |_| 1.0 / (r * r))),
    };
    let mut claims = vec![
        on_manifold(1e-9),
        below("weingarten", "weingarten", Measure::MaxAbs, 1e-6, Basis::Derived),
    ];
    claims.extend(closed_form_claims(&cf, 2));
    let notes = vec!["negative control: umbilic, so 3λ₁ + λ₂ = 4/r ≠ 0".into()];
    CatalogEntry::assemble(surface, 2, p.clone(), claims, cf, notes)
}

/// Clifford torus of `S³` with a seeded smooth normal perturbation of size `ε`.
pub(super) fn clifford_perturbed(p: &Params) -> Result<CatalogEntry> {
    let eps = p.get("eps");
    let seed = p.get("seed") as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64, f64, f64)> = [(1, 0), (0, 1), (1, 1), (2, 1), (1, -2)]
        .iter()
        .map(|&(j, k)| (j as f64, k as f64, rng.gen_range(0.5..1.0), rng.gen_range(0.0..TAU)))
        .collect();
    let chart = FnChart::new(2, 4, move |x: &[f64]| {
        let (u, v) = (x[0], x[1]);
        let bump: f64 = modes.iter().map(|&(j, k, a, ph)| a * (j * u + k * v + ph).cos()).sum();
        let t = PI / 4.0 + eps * bump;
        DVector::from_vec(vec![t.cos() * u.cos(), t.cos() * u.sin(), t.sin() * v.cos(), t.sin() * v.sin()])
    });
    let grid = ChartGrid::new(vec![Axis::periodic(0.0, TAU, 65), Axis::periodic(0.0, TAU, 65)], MARGIN)?;
    let surface = Surface::new("clifford_perturbed", AmbientSpace::sphere(3), Arc::new(chart), grid)?;
    let mut claims = vec![on_manifold(1e-9)];
    claims.extend(biharmonic_claims(Basis::Derived));
    let notes = vec!["negative control: not biharmonic for ε ≠ 0".into()];
    CatalogEntry::assemble(surface, 2, p.clone(), claims, ClosedForm::default(), notes)
}

/// Geodesic sphere of radius `R` in `H^{m+1}` (hyperboloid model, time coordinate last).
pub(super) fn hyperbolic_sphere(p: &Params) -> Result<CatalogEntry> {
    let m = sphere_dim(p, "m", &[2, 3])?;
    let big_r = p.get("R");
    let (s, ch) = (big_r.sinh(), big_r.cosh());
    let chart = FnChart::new(m, m + 2, move |x: &[f64]| {
        let mut v: Vec<f64> = unit_sphere(m, x).0.into_iter().map(|c| s * c).collect();
        v.push(ch);
        DVector::from_vec(v)
    });
    let grid = ChartGrid::new(sphere_axes(m), MARGIN)?;
    let surface = Surface::new("hyperbolic_sphere", AmbientSpace::hyperbolic(m + 1), Arc::new(chart), grid)?;
    let k = ch / s;
    let cf = ClosedForm {
        principal_curvatures: Some(Arc::new(move |_| vec![k; m])),
        metric: Some(Arc::new(move |x| diag(&unit_sphere(m, x).1.iter().map(|g| s * s * g).collect::<Vec<_>>()))),
        gauss_curvature: (m == 2).then(|| Arc::new(move |_: &[f64]| 1.0 / (s * s)) as _),
    };
    let mut claims = vec![on_manifold(1e-9)];
    claims.extend(closed_form_claims(&cf, m));
    claims.extend(cmc_claims());
    let notes = vec![format!("principal curvatures coth R = {k}")];
    CatalogEntry::assemble(surface, m, p.clone(), claims, cf, notes)
}
