//! Nodewise residuals of the characterising equations and identities,
//! aggregated into reports.
//!
//! Every residual is a signed field paired with a scale field (the magnitude
//! of the equation's largest term at each node). Entries report both the
//! absolute maximum and the maximum relative to `max(1, scale)`.

mod ops;
mod report;

use std::collections::BTreeMap;

pub use ops::{deltaf4_closed_form, Analysis, HessianConvention, CMC_TOL, GRAD_K_MIN};
pub use report::{
    Basis, Comparison, Entry, GridSummary, Measure, ResidualField, ResidualReport, Status, Verdict,
};

use crate::calculus::StencilOrder;
use crate::surface::SampledSurface;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    pub order: StencilOrder,
    pub richardson: bool,
    pub hessian: HessianConvention,
    pub isothermal: bool,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self {
            order: StencilOrder::Four,
            richardson: false,
            hessian: HessianConvention::Mean,
            isothermal: false,
        }
    }
}

/// All residual fields of one sampled surface, plus the operations that were
/// rejected by their preconditions (keyed by the entry names they would produce).
pub struct Evaluation {
    pub fields: Vec<ResidualField>,
    pub rejected: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl Evaluation {
    fn reject(&mut self, names: &[&str], err: crate::Error) {
        for n in names {
            self.rejected.insert((*n).to_string(), err.to_string());
        }
    }

    pub fn field(&self, name: &str) -> Option<&ResidualField> {
        self.fields.iter().find(|f| f.name == name)
    }
}

/// Runs every applicable residual operation.
pub fn evaluate(s: &SampledSurface, opts: &ResidualOptions) -> Evaluation {
    let an = Analysis::new(s, opts.order, opts.richardson);
    let mut ev = Evaluation { fields: an.basics(), rejected: BTreeMap::new(), notes: Vec::new() };
    ev.fields.extend(an.biharmonic());
    ev.fields.push(an.biconservative());
    ev.fields.extend(an.s2_identities());

    let nabla = an.nabla_a2(&an.d_fine);
    ev.fields.push(ResidualField::unscaled("nabla_a_norm2", nabla.clone()));
    ev.fields.push(an.chen_margin(&nabla, &an.grad_f2_with(&an.d_fine)));
    let mut hess = an.hessian_identity(opts.hessian);
    ev.notes.push(format!(
        "hessian_identity uses the {} normalisation",
        match opts.hessian {
            HessianConvention::Mean => "mean (f = tr A / m)",
            HessianConvention::Trace => "trace (f replaced by tr A)",
        }
    ));
    hess.name = "hessian_identity".into();
    ev.fields.push(hess);

    match an.simons() {
        Ok(f) => ev.fields.push(f),
        Err(e) => ev.reject(&["simons"], e),
    }
    match an.deltaf4(&nabla) {
        Ok(f) => ev.fields.push(f),
        Err(e) => ev.reject(&["deltaf4"], e),
    }
    match an.finite_type() {
        Ok(fs) => ev.fields.extend(fs),
        Err(e) => ev.reject(
            &["finite_type_t0", "finite_type_t1", "finite_type_t2", "finite_type_norms", "finite_type_orthogonality"],
            e,
        ),
    }
    match an.cmc_gap() {
        Ok(f) => ev.fields.push(f),
        Err(e) => ev.reject(&["cmc_gap"], e),
    }

    let surface_only = ["gauss_curvature", "gauss_equation", "weingarten", "hopf_cr"];
    let invariants = ["cmop_curvature", "cmop_level_curves", "cmop_pde"];
    match an.intrinsic_curvature(opts.isothermal) {
        Ok(k) => {
            ev.fields.push(ResidualField::unscaled("gauss_curvature", k.clone()));
            ev.fields.push(an.gauss_equation(&k));
            if let Ok(w) = an.weingarten() {
                ev.fields.push(w);
            }
            match an.surface_invariants(&k) {
                Ok((fs, dropped)) => {
                    ev.fields.extend(fs);
                    ev.notes.push(format!(
                        "{dropped} reportable nodes with |grad K| <= {GRAD_K_MIN:e} left out of cmop_level_curves"
                    ));
                }
                Err(e) => ev.reject(&invariants, e),
            }
            match an.hopf() {
                Ok(f) => ev.fields.push(f),
                Err(e) => ev.reject(&["hopf_cr"], e),
            }
        }
        Err(e) => {
            ev.reject(&surface_only, e.clone());
            ev.reject(&invariants, e);
        }
    }
    ev
}
