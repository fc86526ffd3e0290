//! Closed-form example hypersurfaces with their expected facts, and the
//! verification driver that turns residuals into pass/fail verdicts.

mod families;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::calculus::{Axis, Chart, ChartGrid, JetConfig, ScalarFieldSample, StencilOrder};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::profile_ode::c1_bound;
use crate::residuals::{
    deltaf4_closed_form, evaluate, Analysis, Basis, Comparison, Entry, GridSummary, HessianConvention, Measure,
    ResidualField, ResidualOptions, ResidualReport, Status, Verdict,
};
use crate::shape::{shape_operator, unit_normal};
use crate::surface::Surface;

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type MatrixFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// Exact data of an entry as functions of the chart coordinates.
///
/// Principal curvatures are listed in descending order for the canonical
/// orientation of the entry (the one with `f ≥ 0` at the base point).
#[derive(Clone, Default)]
pub struct ClosedForm {
    pub principal_curvatures: Option<VectorFn>,
    pub metric: Option<MatrixFn>,
    pub gauss_curvature: Option<ScalarFn>,
}

/// An expected fact: a statistic of a report entry compared with a tolerance.
/// Report entries whose signed values flip with the unit normal.
const ORIENTATION_ODD: &[&str] = &["mean_curvature", "biharmonic_normal", "closed_form_mean_curvature"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub name: String,
    pub entry: String,
    pub measure: Measure,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub basis: Basis,
}

impl Claim {
    pub fn new(name: &str, entry: &str, measure: Measure, comparison: Comparison, tolerance: f64, basis: Basis) -> Self {
        Self { name: name.into(), entry: entry.into(), measure, comparison, tolerance, basis }
    }

    /// The same fact for the opposite unit normal: signed bounds on entries
    /// that change sign with the normal are mirrored.
    pub fn mirrored(&self) -> Self {
        let odd = ORIENTATION_ODD.contains(&self.entry.as_str());
        let mut c = self.clone();
        match (odd, self.measure) {
            (true, Measure::Min | Measure::Max) => {
                c.measure = if self.measure == Measure::Min { Measure::Max } else { Measure::Min };
                c.comparison = match self.comparison {
                    Comparison::Below => Comparison::Above,
                    Comparison::Above => Comparison::Below,
                };
                c.tolerance = -self.tolerance;
                c
            }
            _ => c,
        }
    }

    /// Verdict against the report entries; missing or empty entries are skipped.
    pub fn judge(&self, entries: &[Entry], rejected: &BTreeMap<String, String>) -> Verdict {
        let mut v = Verdict {
            claim: self.name.clone(),
            entry: Some(self.entry.clone()),
            status: Status::Skipped,
            measure: self.measure,
            comparison: self.comparison,
            tolerance: self.tolerance,
            value: None,
            basis: self.basis,
            reason: None,
        };
        match entries.iter().find(|e| e.name == self.entry) {
            None => {
                v.reason = Some(
                    rejected
                        .get(&self.entry)
                        .cloned()
                        .unwrap_or_else(|| format!("entry `{}` not produced for this surface", self.entry)),
                );
            }
            Some(e) if e.nodes == 0 => v.reason = Some("no reportable nodes".into()),
            Some(e) => {
                let x = self.measure.of(e);
                let ok = match self.comparison {
                    Comparison::Below => x < self.tolerance,
                    Comparison::Above => x > self.tolerance,
                };
                v.value = Some(x);
                v.status = if ok { Status::Pass } else { Status::Fail };
            }
        }
        v
    }
}

/// Declared parameter of a family.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub integer: bool,
    /// Human-readable admissible range.
    pub range: &'static str,
    #[serde(skip)]
    admissible: fn(f64) -> bool,
}

/// Validated parameter values of an entry, every declared parameter present.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Params(pub BTreeMap<String, f64>);

impl Params {
    pub fn get(&self, key: &str) -> f64 {
        self.0[key]
    }

    pub fn to_json(&self) -> serde_json::Map<String, serde_json::Value> {
        self.0.iter().map(|(k, v)| (k.clone(), serde_json::json!(v))).collect()
    }
}

/// A catalog family: an id, its parameters, and a constructor.
pub struct Family {
    pub id: &'static str,
    pub summary: &'static str,
    pub ambient: &'static str,
    pub params: &'static [ParamSpec],
    build: fn(&Params) -> Result<CatalogEntry>,
}

const fn p(name: &'static str, default: f64, range: &'static str, admissible: fn(f64) -> bool) -> ParamSpec {
    ParamSpec { name, default, integer: false, range, admissible }
}

const fn pi(name: &'static str, default: f64, range: &'static str, admissible: fn(f64) -> bool) -> ParamSpec {
    ParamSpec { name, default, integer: true, range, admissible }
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

static FAMILIES: [Family; 10] = [
    Family {
        id: "small_hypersphere",
        summary: "small hypersphere S^m(r) of S^(m+1); biharmonic exactly for r = 1/sqrt(2)",
        ambient: "S^(m+1)",
        params: &[
            pi("m", 2.0, "{2, 3}", |x| x == 2.0 || x == 3.0),
            p("r", FRAC_1_SQRT_2, "(0, 1]", |x| x > 0.0 && x <= 1.0),
        ],
        build: families::small_hypersphere,
    },
    Family {
        id: "clifford_product",
        summary: "S^m1(1/sqrt(2)) x S^m2(1/sqrt(2)) in S^(m1+m2+1); minimal if m1 = m2, proper biharmonic otherwise",
        ambient: "S^(m1+m2+1)",
        params: &[
            pi("m1", 1.0, "{1, 2}, m1 + m2 <= 3", |x| x == 1.0 || x == 2.0),
            pi("m2", 1.0, "{1, 2}, m1 + m2 <= 3", |x| x == 1.0 || x == 2.0),
        ],
        build: families::clifford_product,
    },
    Family {
        id: "product_general",
        summary: "S^m1(r1) x S^m2(sqrt(1 - r1^2)) in S^(m1+m2+1); CMC, hence biconservative",
        ambient: "S^(m1+m2+1)",
        params: &[
            pi("m1", 1.0, "{1, 2}, m1 + m2 <= 3", |x| x == 1.0 || x == 2.0),
            pi("m2", 1.0, "{1, 2}, m1 + m2 <= 3", |x| x == 1.0 || x == 2.0),
            p("r1", 0.6, "(0, 1)", |x| x > 0.0 && x < 1.0),
        ],
        build: families::product_general,
    },
    Family {
        id: "cone_r3",
        summary: "cone (u cos v, u sin v, alpha u) of R^3 in isothermal coordinates",
        ambient: "R^3",
        params: &[p("alpha", 1.0, "(0, inf)", positive)],
        build: families::cone_r3,
    },
    Family {
        id: "cone_s3",
        summary: "cone-like surface of S^3 with Gaussian curvature 1, isothermal coordinates",
        ambient: "S^3",
        params: &[p("alpha", 2.0, "(1, inf)", |x| x > 1.0 && x.is_finite())],
        build: families::cone_s3,
    },
    Family {
        id: "bicons_r3",
        summary: "non-CMC biconservative surface of R^3 with metric C0 cosh^6(u) (du^2 + dv^2)",
        ambient: "R^3",
        params: &[p("C0", 1.0, "(0, inf)", positive)],
        build: families::bicons_r3,
    },
    Family {
        id: "bicons_s3",
        summary: "standard non-CMC biconservative surface of S^3 from the profile curvature ODE",
        ambient: "S^3",
        params: &[p("c1", 20.0, "(64/3^(5/4), inf) = (16.2098..., inf)", |x| x > c1_bound() && x.is_finite())],
        build: families::bicons_s3,
    },
    Family {
        id: "round_sphere",
        summary: "round sphere S^2(r) of R^3 (negative control for the linear Weingarten relation)",
        ambient: "R^3",
        params: &[p("r", 1.0, "(0, inf)", positive)],
        build: families::round_sphere,
    },
    Family {
        id: "clifford_perturbed",
        summary: "Clifford torus of S^3 with a seeded smooth perturbation (negative control for biharmonicity)",
        ambient: "S^3",
        params: &[
            p("eps", 1e-2, "[0, 0.1]", |x| (0.0..=0.1).contains(&x)),
            pi("seed", 7.0, "[0, 2^32)", |x| (0.0..4294967296.0).contains(&x)),
        ],
        build: families::clifford_perturbed,
    },
    Family {
        id: "hyperbolic_sphere",
        summary: "geodesic sphere of radius R in H^(m+1)",
        ambient: "H^(m+1)",
        params: &[
            pi("m", 2.0, "{2, 3}", |x| x == 2.0 || x == 3.0),
            p("R", 1.0, "(0, inf)", positive),
        ],
        build: families::hyperbolic_sphere,
    },
];

pub fn families() -> &'static [Family] {
    &FAMILIES
}

pub fn family(id: &str) -> Result<&'static Family> {
    FAMILIES
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::UnknownSurface(id.to_string()))
}

impl Family {
    /// Fills defaults and validates overrides against the declared ranges.
    pub fn params(&self, overrides: &BTreeMap<String, f64>) -> Result<Params> {
        let mut out = BTreeMap::new();
        for key in overrides.keys() {
            if !self.params.iter().any(|s| s.name == key) {
                let known: Vec<&str> = self.params.iter().map(|s| s.name).collect();
                return Err(Error::Input(format!("`{}` has no parameter `{key}` (parameters: {known:?})", self.id)));
            }
        }
        for spec in self.params {
            let x = overrides.get(spec.name).copied().unwrap_or(spec.default);
            if spec.integer && x.fract() != 0.0 {
                return Err(Error::Input(format!("{} must be an integer, got {x}", spec.name)));
            }
            if !(spec.admissible)(x) {
                return Err(Error::Input(format!("{} = {x} outside the admissible range {}", spec.name, spec.range)));
            }
            out.insert(spec.name.to_string(), x);
        }
        Ok(Params(out))
    }

    pub fn instantiate(&self, overrides: &BTreeMap<String, f64>) -> Result<CatalogEntry> {
        (self.build)(&self.params(overrides)?)
    }
}

/// Builds a catalog entry from its id and parameter overrides.
pub fn instantiate(id: &str, overrides: &BTreeMap<String, f64>) -> Result<CatalogEntry> {
    family(id)?.instantiate(overrides)
}

/// An instantiated example: surface, default grid, expected facts.
#[derive(Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub surface: Surface,
    pub dim_m: usize,
    pub params: Params,
    pub claims: Vec<Claim>,
    pub closed_form: ClosedForm,
    pub notes: Vec<String>,
    /// Scalars computed at construction (e.g. ODE statistics), reported as constant entries.
    pub constants: Vec<(String, f64)>,
    /// `+1` in the canonical orientation, `−1` after [`CatalogEntry::flipped`].
    sign: f64,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("surface", &self.surface)
            .field("claims", &self.claims.len())
            .finish_non_exhaustive()
    }
}

fn base_point(grid: &ChartGrid) -> Vec<f64> {
    grid.axes().iter().map(|a| a.coord(a.count / 2)).collect()
}

impl CatalogEntry {
    /// Picks the canonical orientation: the closed-form principal curvatures
    /// when known, otherwise `f ≥ 0` at the base point.
    fn assemble(
        mut surface: Surface,
        dim_m: usize,
        params: Params,
        claims: Vec<Claim>,
        closed_form: ClosedForm,
        notes: Vec<String>,
    ) -> Result<Self> {
        let x = base_point(&surface.grid);
        let j = surface.chart.jet(&x, JetConfig::default())?;
        let eta = unit_normal(&j, &surface.space, 1.0)?;
        let fr = shape_operator(&j, &eta, &surface.space)?;
        let sign = match &closed_form.principal_curvatures {
            Some(lam) => {
                let exact = lam(&x);
                let miss = |s: f64| {
                    let mut l: Vec<f64> = fr.lambda.iter().map(|v| s * v).collect();
                    l.sort_by(|a, b| b.total_cmp(a));
                    l.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                };
                if miss(-1.0) < miss(1.0) {
                    -1.0
                } else {
                    1.0
                }
            }
            None if fr.f < 0.0 => -1.0,
            None => 1.0,
        };
        surface.orientation = sign;
        Ok(Self {
            id: surface.id.clone(),
            surface,
            dim_m,
            params,
            claims,
            closed_form,
            notes,
            constants: Vec::new(),
            sign: 1.0,
        })
    }

    /// Same entry with the opposite unit normal.
    pub fn flipped(&self) -> Self {
        let mut e = self.clone();
        e.surface = self.surface.flipped();
        e.sign = -self.sign;
        e.claims = self.claims.iter().map(Claim::mirrored).collect();
        e
    }

    /// Same entry composed with an ambient isometry.
    pub fn transformed(&self, q: DMatrix<f64>) -> Result<Self> {
        let mut e = self.clone();
        e.surface = self.surface.transformed(q)?;
        Ok(e)
    }

    pub fn with_grid(mut self, grid: ChartGrid) -> Result<Self> {
        self.surface = self.surface.with_grid(grid)?;
        Ok(self)
    }

    /// Replaces the node counts of the default grid (one per axis, or one for all).
    pub fn with_counts(self, counts: &[usize]) -> Result<Self> {
        let grid = self.surface.grid.clone();
        let n = grid.dim();
        if counts.len() != 1 && counts.len() != n {
            return Err(Error::Input(format!("expected 1 or {n} grid counts, got {}", counts.len())));
        }
        let axes = grid
            .axes()
            .iter()
            .enumerate()
            .map(|(k, a)| Axis { count: counts[k.min(counts.len() - 1)], ..a.clone() })
            .collect();
        self.with_grid(ChartGrid::new(axes, grid.margin())?)
    }

    /// Replaces the coordinate ranges of the default grid, one `(lo, hi)` per axis.
    pub fn with_ranges(self, ranges: &[(f64, f64)]) -> Result<Self> {
        let grid = self.surface.grid.clone();
        if ranges.len() != grid.dim() {
            return Err(Error::Input(format!("expected {} grid ranges, got {}", grid.dim(), ranges.len())));
        }
        let axes = grid
            .axes()
            .iter()
            .zip(ranges)
            .map(|(a, &(lo, hi))| Axis { lo, hi, ..a.clone() })
            .collect();
        self.with_grid(ChartGrid::new(axes, grid.margin())?)
    }

    /// Closed-form principal curvatures for the current orientation, descending.
    fn exact_lambda(&self, x: &[f64]) -> Option<Vec<f64>> {
        let lam = self.closed_form.principal_curvatures.as_ref()?;
        let mut l: Vec<f64> = lam(x).into_iter().map(|v| self.sign * v).collect();
        l.sort_by(|a, b| b.total_cmp(a));
        Some(l)
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

/// Numerical settings of a verification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub jet: JetConfig,
    pub order: StencilOrder,
    pub richardson: bool,
    pub exec: Exec,
    /// Normalisation of the Hessian identity; calibrated when `None`.
    pub hessian: Option<HessianConvention>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            jet: JetConfig::default(),
            order: StencilOrder::Four,
            richardson: false,
            exec: Exec::default(),
            hessian: None,
        }
    }
}

/// Outcome of choosing the Hessian-identity normalisation on `bicons_r3(C0 = 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    pub convention: HessianConvention,
    pub mean_residual: f64,
    pub trace_residual: f64,
}

static CALIBRATION: OnceLock<Calibration> = OnceLock::new();

/// Evaluates both normalisations of the Hessian identity on `bicons_r3(C0 = 1)`
/// (33 × 33 grid) and keeps the one with the smaller relative residual.
pub fn hessian_calibration() -> Calibration {
    *CALIBRATION.get_or_init(|| {
        let params = Params(BTreeMap::from([("C0".to_string(), 1.0)]));
        let entry = families::bicons_r3_on(&params, 33).expect("calibration surface");
        let s = entry.surface.sample(JetConfig::default(), Exec::default()).expect("calibration sampling");
        let an = Analysis::new(&s, StencilOrder::Four, false);
        let rel = |c| an.hessian_identity(c).summarize(s.grid(), &s.mask).max_rel;
        let (mean, trace) = (rel(HessianConvention::Mean), rel(HessianConvention::Trace));
        Calibration {
            convention: if mean <= trace { HessianConvention::Mean } else { HessianConvention::Trace },
            mean_residual: mean,
            trace_residual: trace,
        }
    })
}

fn nodewise(n: usize, f: impl Fn(usize) -> f64) -> ScalarFieldSample {
    ScalarFieldSample::new((0..n).map(f).collect())
}

/// Samples the entry, evaluates every applicable residual, and judges the claims.
pub fn verify(entry: &CatalogEntry, opts: &VerifyOptions) -> Result<ResidualReport> {
    let s = entry.surface.sample(opts.jet, opts.exec)?;
    let grid = s.grid().clone();
    let n = s.len();
    let mut notes = entry.notes.clone();
    let hessian = match opts.hessian {
        Some(c) => c,
        None => {
            let cal = hessian_calibration();
            notes.push(format!(
                "hessian_identity normalisation calibrated on bicons_r3(C0 = 1), 33x33: mean {:.3e}, trace {:.3e}",
                cal.mean_residual, cal.trace_residual
            ));
            cal.convention
        }
    };
    let ev = evaluate(
        &s,
        &ResidualOptions { order: opts.order, richardson: opts.richardson, hessian, isothermal: entry.surface.isothermal },
    );
    let mut fields = ev.fields;
    notes.extend(ev.notes);
    let coords: Vec<Vec<f64>> = (0..n).map(|k| grid.coords(k)).collect();

    if entry.closed_form.principal_curvatures.is_some() {
        let exact: Vec<Vec<f64>> = coords.iter().map(|x| entry.exact_lambda(x).expect("closed form")).collect();
        let m = entry.dim_m as f64;
        fields.push(ResidualField::unscaled(
            "closed_form_mean_curvature",
            nodewise(n, |k| s.frames[k].f - exact[k].iter().sum::<f64>() / m),
        ));
        fields.push(ResidualField::unscaled(
            "closed_form_principal_curvatures",
            nodewise(n, |k| {
                s.frames[k].lambda.iter().zip(&exact[k]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            }),
        ));
        // the reduced identity only applies with constant principal curvatures
        let constant = exact.iter().all(|l| l.iter().zip(&exact[0]).all(|(a, b)| (a - b).abs() <= 1e-14 * b.abs().max(1.0)));
        if constant {
            let c = s.space.c();
            fields.push(ResidualField::unscaled(
                "deltaf4_closed_form",
                nodewise(n, |k| deltaf4_closed_form(c, &exact[k])),
            ));
        }
    }
    if let Some(g) = &entry.closed_form.metric {
        fields.push(ResidualField::unscaled(
            "closed_form_metric",
            nodewise(n, |k| (&s.frames[k].g - g(&coords[k])).amax()),
        ));
    }
    if let Some(kf) = &entry.closed_form.gauss_curvature {
        if let Some(k_num) = fields.iter().find(|f| f.name == "gauss_curvature").map(|f| f.value.clone()) {
            fields.push(ResidualField::unscaled(
                "closed_form_gauss_curvature",
                nodewise(n, |k| k_num[k] - kf(&coords[k])),
            ));
        }
    }
    for (name, value) in &entry.constants {
        fields.push(ResidualField::unscaled(name.clone(), ScalarFieldSample::constant(&grid, *value)));
    }

    let entries: Vec<Entry> = fields.iter().map(|f| f.summarize(&grid, &s.mask)).collect();
    let verdicts: Vec<Verdict> = entry.claims.iter().map(|c| c.judge(&entries, &ev.rejected)).collect();
    for (name, why) in &ev.rejected {
        notes.push(format!("{name}: {why}"));
    }
    let reported = s.mask.iter().filter(|m| **m).count();
    Ok(ResidualReport {
        schema: "1",
        surface: entry.id.clone(),
        params: entry.params.to_json(),
        grid: GridSummary {
            axes: grid.axes().to_vec(),
            margin: grid.margin(),
            nodes: n,
            reported_nodes: reported,
            excluded_nodes: n - reported,
            stencil_order: match opts.order {
                StencilOrder::Four => 4,
                StencilOrder::Six => 6,
            },
            richardson: opts.richardson,
        },
        entries,
        verdicts,
        notes,
    })
}

/// CSV mesh `u,v[,w],x1..xN[,f,K]` over every grid node, axis 0 slowest.
///
/// `K` is `det A + c` for surfaces and NaN for higher dimensions.
pub fn export_mesh(entry: &CatalogEntry, with_scalars: bool, opts: &VerifyOptions) -> Result<String> {
    let surface = &entry.surface;
    let grid = &surface.grid;
    let m = surface.dim();
    let names = ["u", "v", "w"];
    let mut header: Vec<String> = names[..m].iter().map(|s| s.to_string()).collect();
    header.extend((1..=surface.space.embedding_dim()).map(|i| format!("x{i}")));
    let scalars = if with_scalars {
        header.push("f".into());
        header.push("K".into());
        let s = surface.sample(opts.jet, opts.exec)?;
        let c = s.space.c();
        Some(
            s.frames
                .iter()
                .map(|fr| (fr.f, if m == 2 { fr.lambda.iter().product::<f64>() + c } else { f64::NAN }))
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let mut out = header.join(",");
    out.push('\n');
    for node in 0..grid.len() {
        let x = grid.coords(node);
        let p = surface.chart.eval(&x);
        let mut row: Vec<f64> = x.clone();
        row.extend(p.iter());
        if let Some(sc) = &scalars {
            row.push(sc[node].0);
            row.push(sc[node].1);
        }
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// JSON index of every family: parameters and the claims of the default instance.
pub fn index_json() -> Result<serde_json::Value> {
    let mut list = Vec::new();
    for fam in families() {
        let entry = fam.instantiate(&BTreeMap::new())?;
        list.push(serde_json::json!({
            "id": fam.id,
            "summary": fam.summary,
            "ambient": fam.ambient,
            "dim": entry.dim_m,
            "params": fam.params,
            "isothermal": entry.surface.isothermal,
            "default_grid": entry.surface.grid,
            "claims": entry.claims,
            "notes": entry.notes,
        }));
    }
    Ok(serde_json::json!({ "schema": "1", "families": list }))
}
