//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use spaceform::catalog::{self, CatalogEntry, VerifyOptions};
use spaceform::profile_ode::{
    admissible_range, band_limits, c1_bound, equilibrium_kappa, kappa_rhs, reconstruct_sigma,
};
use spaceform::residuals::{Entry, ResidualReport, Status};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn entry_of(id: &str, pairs: &[(&str, f64)]) -> Result<CatalogEntry, String> {
    catalog::instantiate(id, &params(pairs)).map_err(|e| format!("{id}: {e}"))
}

fn run(id: &str, pairs: &[(&str, f64)], opts: &VerifyOptions) -> Result<ResidualReport, String> {
    let entry = entry_of(id, pairs)?;
    catalog::verify(&entry, opts).map_err(|e| format!("{id}: {e}"))
}

fn get<'a>(r: &'a ResidualReport, name: &str) -> Result<&'a Entry, String> {
    r.entry(name).ok_or_else(|| format!("{}: no entry `{name}`", r.surface))
}

fn counts(r: &ResidualReport) -> Vec<usize> {
    r.grid.axes.iter().map(|a| a.count).collect()
}

/// Collects failed checks and a short trace of the measured values.
#[derive(Default)]
struct Checks {
    trace: Vec<String>,
    failures: Vec<String>,
}

impl Checks {
    fn below(&mut self, label: &str, value: f64, tol: f64) {
        self.push(label, value, value < tol, &format!("< {tol:.0e}"));
    }

    fn above(&mut self, label: &str, value: f64, tol: f64) {
        self.push(label, value, value > tol, &format!("> {tol:.0e}"));
    }

    fn push(&mut self, label: &str, value: f64, ok: bool, rule: &str) {
        let s = format!("{label} {value:.2e}");
        if !ok {
            self.failures.push(format!("{s} (want {rule})"));
        }
        self.trace.push(s);
    }

    fn flag(&mut self, label: &str, ok: bool) {
        if !ok {
            self.failures.push(label.to_string());
        }
        self.trace.push(format!("{label}: {ok}"));
    }

    fn finish(self) -> Outcome {
        if self.failures.is_empty() {
            Ok(self.trace.join(", "))
        } else {
            Err(self.failures.join("; "))
        }
    }
}

fn biharmonic_catalog() -> Outcome {
    let mut c = Checks::default();
    for (id, pairs, f_exact) in [
        ("small_hypersphere", vec![("m", 3.0)], 1.0),
        ("clifford_product", vec![("m1", 2.0), ("m2", 1.0)], 1.0 / 3.0),
    ] {
        let t = Instant::now();
        let r = run(id, &pairs, &VerifyOptions::default())?;
        let secs = t.elapsed().as_secs_f64();
        c.flag(&format!("{id} grid {:?}", counts(&r)), counts(&r) == vec![33, 33, 33]);
        c.below(&format!("{id} normal max_rel"), get(&r, "biharmonic_normal")?.max_rel, 1e-6);
        c.below(&format!("{id} tangent max_rel"), get(&r, "biharmonic_tangent")?.max_rel, 1e-6);
        let f = get(&r, "mean_curvature")?;
        c.below(&format!("{id} |f - {f_exact:.4}|"), (f.min - f_exact).abs().max((f.max - f_exact).abs()), 1e-8);
        c.below(&format!("{id} seconds"), secs, 120.0);
    }
    c.finish()
}

fn minimal_control() -> Outcome {
    let mut c = Checks::default();
    let r = run("clifford_product", &[], &VerifyOptions::default())?;
    c.below("|f|", get(&r, "mean_curvature")?.max_abs, 1e-10);
    c.below("normal", get(&r, "biharmonic_normal")?.max_abs, 1e-8);
    c.below("tangent", get(&r, "biharmonic_tangent")?.max_abs, 1e-8);
    c.finish()
}

fn biconservative_r3() -> Outcome {
    let mut c = Checks::default();
    let t = Instant::now();
    let r = run("bicons_r3", &[("C0", 1.0)], &VerifyOptions::default())?;
    let secs = t.elapsed().as_secs_f64();
    c.flag(&format!("grid {:?}", counts(&r)), counts(&r) == vec![65, 65]);
    c.below("metric", get(&r, "closed_form_metric")?.max_abs, 1e-8);
    c.below("K", get(&r, "closed_form_gauss_curvature")?.max_abs, 1e-6);
    c.below("biconservative max_rel", get(&r, "biconservative")?.max_rel, 1e-6);
    c.below("3l1+l2", get(&r, "weingarten")?.max_abs, 1e-6);
    c.above("chen min (coefficient 28)", get(&r, "chen_margin")?.min, -1e-6);
    let h = get(&r, "hessian_identity")?;
    c.below("hessian max_rel", h.max_rel, 1e-4);
    c.trace.push(format!("hessian max_abs {:.2e}", h.max_abs));
    c.flag(
        "calibrated",
        r.notes.iter().any(|n| n.contains("hessian_identity normalisation calibrated")),
    );
    c.below("seconds", secs, 30.0);
    c.finish()
}

fn ode_pipeline() -> Outcome {
    let mut c = Checks::default();
    let t = Instant::now();
    let sol = reconstruct_sigma(20.0, 10, 128, 1e-10).map_err(|e| e.to_string())?;
    c.below("drift", sol.max_drift(), 1e-8);
    c.flag("period found", sol.period.is_some());
    c.below("period spread", sol.period_spread(), 1e-8);
    c.below("band excess", sol.band_excess(), 1e-9);
    c.below("constraint", sol.constraint_max(), 1e-6);
    let r = run("bicons_s3", &[("c1", 20.0)], &VerifyOptions::default())?;
    c.below("manifold", get(&r, "manifold_residual")?.max_abs, 1e-8);
    c.below("biconservative max_rel", get(&r, "biconservative")?.max_rel, 1e-4);
    c.below("K+3f^2-1", get(&r, "cmop_curvature")?.max_abs, 1e-4);
    let pde = get(&r, "cmop_pde")?;
    c.below("pde max_rel", pde.max_rel, 1e-3);
    c.trace.push(format!("pde max_abs {:.2e} at term scale {:.1}", pde.max_abs, pde.scale));
    c.above("min f", get(&r, "mean_curvature")?.min, 0.0);
    c.below("seconds", t.elapsed().as_secs_f64(), 300.0);
    c.finish()
}

fn degenerate_parameter() -> Outcome {
    let mut c = Checks::default();
    let k0 = equilibrium_kappa();
    let bound = c1_bound();
    let (lo, hi) = band_limits(bound).map_err(|e| e.to_string())?;
    c.below("limit band offset", (lo - k0).abs().max((hi - k0).abs()), 1e-9);
    c.flag("bound itself rejected", admissible_range(bound).is_err());
    // the band half-width shrinks like sqrt(C1 - bound)
    let mut last = f64::INFINITY;
    let mut ratios = Vec::new();
    for e in [2, 4, 6, 8, 10, 12] {
        let delta = bound * 10f64.powi(-e);
        let (lo, hi) = admissible_range(bound + delta).map_err(|e| e.to_string())?;
        let offset = (lo - k0).abs().max((hi - k0).abs());
        c.flag(&format!("monotone at 1e-{e}"), offset < last && lo < k0 && k0 < hi);
        last = offset;
        ratios.push(0.5 * (hi - lo) / delta.sqrt());
    }
    let spread = ratios.iter().fold(0.0f64, |a, r| a.max((r / ratios[ratios.len() - 1] - 1.0).abs()));
    c.below("sqrt-law spread (1e-2..1e-12)", spread, 0.2);
    c.trace.push(format!("offset at 1e-12 {last:.2e}"));
    c.below("kappa_rhs(3^-1/2, 0)", kappa_rhs(k0, 0.0).map_err(|e| e.to_string())?.abs(), 1e-15);
    c.finish()
}

fn finite_type() -> Outcome {
    let mut c = Checks::default();
    let r = run("clifford_product", &[("m1", 2.0), ("m2", 1.0)], &VerifyOptions::default())?;
    c.below("t1 (eig 2)", get(&r, "finite_type_t1")?.max_abs, 1e-5);
    c.below("t2 (eig 4)", get(&r, "finite_type_t2")?.max_abs, 1e-5);
    c.below("norms", get(&r, "finite_type_norms")?.max_abs, 1e-8);
    c.below("orthogonality", get(&r, "finite_type_orthogonality")?.max_abs, 1e-8);
    let s = run("small_hypersphere", &[("m", 3.0)], &VerifyOptions::default())?;
    c.below("sphere t1 (eig 6)", get(&s, "finite_type_t1")?.max_abs, 1e-5);
    c.finish()
}

fn s2_identities() -> Outcome {
    let mut c = Checks::default();
    for fam in catalog::families() {
        let e = fam.instantiate(&BTreeMap::new()).map_err(|e| e.to_string())?;
        let cf = &e.closed_form;
        let closed = cf.principal_curvatures.is_some() || cf.metric.is_some() || cf.gauss_curvature.is_some();
        if !closed {
            continue;
        }
        let div_tol = if fam.id == "bicons_r3" { 1e-4 } else { 1e-8 };
        let r = catalog::verify(&e, &VerifyOptions::default()).map_err(|e| e.to_string())?;
        let worst = get(&r, "s2_trace")?.max_abs.max(get(&r, "s2_norm")?.max_abs);
        c.below(&format!("{} trace/norm", fam.id), worst, 1e-8);
        c.below(&format!("{} div", fam.id), get(&r, "s2_divergence")?.max_abs, div_tol);
    }
    c.finish()
}

fn simons_identities() -> Outcome {
    let mut c = Checks::default();
    let opts = VerifyOptions { richardson: true, ..VerifyOptions::default() };
    let r = run("bicons_r3", &[], &opts)?;
    c.below("simons on bicons_r3", get(&r, "simons")?.max_abs, 1e-3);
    for (id, pairs) in [("small_hypersphere", vec![]), ("clifford_product", vec![("m1", 2.0), ("m2", 1.0)])] {
        let r = run(id, &pairs, &VerifyOptions::default())?;
        c.below(&format!("{id} reduction"), get(&r, "deltaf4_closed_form")?.max_abs, 1e-12);
    }
    c.finish()
}

fn hopf() -> Outcome {
    let mut c = Checks::default();
    let r = run("clifford_product", &[], &VerifyOptions::default())?;
    c.below("torus cr", get(&r, "hopf_cr")?.max_abs, 1e-5);
    for id in ["cone_r3", "cone_s3"] {
        let e = entry_of(id, &[])?;
        let cc = e.surface.space.c();
        let r = catalog::verify(&e, &VerifyOptions::default()).map_err(|e| e.to_string())?;
        c.below(&format!("{id} cr"), get(&r, "hopf_cr")?.max_abs, 1e-5);
        c.above(&format!("{id} sup|grad f|"), get(&r, "grad_f_norm")?.max, 1e-2);
        let k = get(&r, "gauss_curvature")?;
        c.below(&format!("{id} |K - c|"), (k.max - cc).abs().max((k.min - cc).abs()), 1e-6);
    }
    c.finish()
}

fn negative_controls() -> Outcome {
    let mut c = Checks::default();
    let cases: [(&[&str], &[&str]); 3] = [
        (&["clifford_perturbed"], &["biharmonic_normal", "biharmonic_tangent"]),
        (&["round_sphere"], &["weingarten"]),
        (&["small_hypersphere", "--r", "0.9"], &["biharmonic_normal"]),
    ];
    for (args, claims) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_spaceform"))
            .arg("verify")
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        let label = args.join(" ");
        c.flag(&format!("`{label}` exit 1"), out.status.code() == Some(1));
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        for claim in claims {
            let v = report["verdicts"]
                .as_array()
                .and_then(|vs| vs.iter().find(|v| v["claim"] == *claim))
                .ok_or_else(|| format!("{label}: no verdict {claim}"))?;
            c.flag(&format!("{label} {claim} fails"), v["status"] == "fail");
            let value = v["value"].as_f64().unwrap_or(f64::NAN);
            if args[0] == "clifford_perturbed" {
                c.above(&format!("{label} {claim}"), value, 1e-3);
            } else {
                c.trace.push(format!("{label} {claim} {value:.2e}"));
            }
        }
    }
    c.finish()
}

fn invariance() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let opts = VerifyOptions::default();
    let mut worst = (0.0f64, String::from("none"));
    let mut compared = 0;
    for fam in catalog::families() {
        let e = fam.instantiate(&BTreeMap::new()).map_err(|e| e.to_string())?;
        let base = catalog::verify(&e, &opts).map_err(|e| e.to_string())?;
        let mut variants = vec![("flip", e.flipped())];
        for _ in 0..2 {
            let q = e.surface.space.random_isometry(&mut rng);
            variants.push(("isometry", e.transformed(q).map_err(|e| e.to_string())?));
        }
        for (kind, v) in variants {
            let r = catalog::verify(&v, &opts).map_err(|e| e.to_string())?;
            if r.entries.len() != base.entries.len() {
                return Err(format!("{} {kind}: entry sets differ", fam.id));
            }
            for (a, b) in base.entries.iter().zip(&r.entries) {
                for (x, y) in [(a.max_abs, b.max_abs), (a.max_rel, b.max_rel), (a.l2_mean, b.l2_mean)] {
                    let d = (x - y).abs();
                    if d > worst.0 || d.is_nan() {
                        worst = (d, format!("{} {kind} {}", fam.id, a.name));
                    }
                    compared += 1;
                }
            }
            let pass_a: Vec<_> = base.verdicts.iter().map(|v| v.status == Status::Pass).collect();
            let pass_b: Vec<_> = r.verdicts.iter().map(|v| v.status == Status::Pass).collect();
            if pass_a != pass_b {
                return Err(format!("{} {kind}: verdicts changed", fam.id));
            }
        }
    }
    let msg = format!("{compared} scalars, worst {:.2e} ({})", worst.0, worst.1);
    if worst.0 < 1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("biharmonic catalog", biharmonic_catalog),
        ("minimal control", minimal_control),
        ("biconservative surface in R^3", biconservative_r3),
        ("profile ODE pipeline", ode_pipeline),
        ("degenerate parameter", degenerate_parameter),
        ("finite type", finite_type),
        ("stress-bienergy identities", s2_identities),
        ("Simons identities", simons_identities),
        ("Hopf function", hopf),
        ("negative controls", negative_controls),
        ("invariance", invariance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
