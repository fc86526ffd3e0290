//! Profile curvature ODE of the standard biconservative surfaces in the
//! 3-sphere, its first integral, and the reconstruction of the profile curve
//! and surface.
//!
//! The curvature obeys
//! `κ'' κ = (7/4) κ'² + (4/3) κ² − 4 κ⁴` with first integral
//! `κ'² = −(16/9) κ² − 16 κ⁴ + C̃₁ κ^{7/2}`. Positive periodic solutions exist
//! for `C̃₁ > 64 / 3^{5/4}` and oscillate in the band where the right-hand
//! side of the first integral is positive.

mod curve;
mod dopri;

pub use curve::{assemble_surface, geodesic_diagnostic, orbit_radius, reconstruct_sigma, ProfileChart};
pub use dopri::{Dopri5, StepInfo};

use serde::Serialize;

use crate::error::{Error, Result};

/// `64 / 3^{5/4}`, the lower end of the admissible parameter range.
pub fn c1_bound() -> f64 {
    64.0 / 3f64.powf(1.25)
}

/// Curvature of the constant solution at the bound, `3^{-1/2}`.
pub fn equilibrium_kappa() -> f64 {
    1.0 / 3f64.sqrt()
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0) {
        return Err(Error::Input(format!("curvature must be positive, got {kappa}")));
    }
    Ok(())
}

/// `κ'' = [(7/4)κ'² + (4/3)κ² − 4κ⁴] / κ`.
pub fn kappa_rhs(kappa: f64, kappa_prime: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(rhs_unchecked(kappa, kappa_prime))
}

fn rhs_unchecked(k: f64, kp: f64) -> f64 {
    (1.75 * kp * kp + (4.0 / 3.0) * k * k - 4.0 * k.powi(4)) / k
}

/// `P(κ) = −(16/9)κ² − 16κ⁴ + C̃₁κ^{7/2}`.
pub fn band_polynomial(kappa: f64, c1: f64) -> f64 {
    -(16.0 / 9.0) * kappa * kappa - 16.0 * kappa.powi(4) + c1 * kappa.powf(3.5)
}

/// `κ'² − P(κ)`; zero along exact solutions with parameter `c1`.
pub fn first_integral_residual(kappa: f64, kappa_prime: f64, c1: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(kappa_prime * kappa_prime - band_polynomial(kappa, c1))
}

// P / κ² = −16/9 − 16κ² + C̃₁κ^{3/2}, maximal at κ* = (3C̃₁/64)².
fn reduced(kappa: f64, c1: f64) -> f64 {
    -(16.0 / 9.0) - 16.0 * kappa * kappa + c1 * kappa.powf(1.5)
}

fn bisect(mut lo: f64, mut hi: f64, c1: f64) -> f64 {
    // reduced(lo) and reduced(hi) have opposite signs
    let s_lo = reduced(lo, c1).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-12 * 1e-3 {
            break;
        }
        if reduced(mid, c1).signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Band `[κ_min, κ_max]` for `C̃₁ ≥ 64/3^{5/4}`; at the bound itself both ends
/// are the double root `(3C̃₁/64)² = 3^{-1/2}`.
pub fn band_limits(c1: f64) -> Result<(f64, f64)> {
    let bound = c1_bound();
    if !(c1 >= bound) || !c1.is_finite() {
        return Err(Error::Parameter(format!(
            "C1 = {c1} is below the bound 64/3^(5/4) = {bound:.10}"
        )));
    }
    let peak = (3.0 * c1 / 64.0).powi(2);
    if !(reduced(peak, c1) > 0.0) {
        return Ok((peak, peak));
    }
    let lo = bisect(0.0, peak, c1);
    // reduced < 0 for κ large enough that 16κ² > C̃₁κ^{3/2}
    let mut top = 2.0 * peak;
    while reduced(top, c1) > 0.0 {
        top *= 2.0;
    }
    let hi = bisect(peak, top, c1);
    Ok((lo, hi))
}

/// The two simple positive roots of `P` bracketing the band where `P > 0`.
/// The parameter range is open: `C̃₁ = 64/3^{5/4}` is rejected.
pub fn admissible_range(c1: f64) -> Result<(f64, f64)> {
    let bound = c1_bound();
    if !(c1 > bound) || !c1.is_finite() {
        return Err(Error::Parameter(format!(
            "C1 must exceed 64/3^(5/4) = {bound:.10} (open range), got {c1}"
        )));
    }
    band_limits(c1)
}

/// Sampled profile solution.
///
/// After [`integrate_profile`] the samples are the integrator's accepted
/// steps and `sigma`/`frame` are empty; after [`reconstruct_sigma`] the
/// samples lie on a uniform lattice and carry the profile curve.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileSolution {
    pub c1_tilde: f64,
    pub tol: f64,
    pub u_grid: Vec<f64>,
    pub kappa: Vec<f64>,
    pub kappa_prime: Vec<f64>,
    /// First-integral residual minus its initial value.
    pub drift: Vec<f64>,
    /// Largest drift over every accepted step of the curvature integration.
    pub max_step_drift: f64,
    pub period: Option<f64>,
    /// Differences of successive section crossings.
    pub period_estimates: Vec<f64>,
    pub band: (f64, f64),
    pub sigma: Vec<[f64; 4]>,
    pub frame: Vec<[f64; 4]>,
    /// `<σ, e₁> − 4κ^{-3/4}/(3√C̃₁)` per sample.
    pub constraint: Vec<f64>,
}

impl ProfileSolution {
    /// Largest drift over the samples and the accepted integration steps.
    pub fn max_drift(&self) -> f64 {
        self.drift.iter().fold(self.max_step_drift, |a, d| a.max(d.abs()))
    }

    pub fn constraint_max(&self) -> f64 {
        self.constraint.iter().fold(0.0, |a, d| a.max(d.abs()))
    }

    /// Largest distance of any sample outside `[κ_min, κ_max]`.
    pub fn band_excess(&self) -> f64 {
        let (lo, hi) = self.band;
        self.kappa
            .iter()
            .map(|&k| (lo - k).max(k - hi).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Largest disagreement between successive period estimates.
    pub fn period_spread(&self) -> f64 {
        self.period_estimates
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with header `u,kappa,kappa_prime,drift,sigma1,sigma2,sigma3,sigma4`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,kappa,kappa_prime,drift,sigma1,sigma2,sigma3,sigma4\n");
        for i in 0..self.u_grid.len() {
            let s = self.sigma.get(i).copied().unwrap_or([f64::NAN; 4]);
            let row = [
                self.u_grid[i],
                self.kappa[i],
                self.kappa_prime[i],
                self.drift[i],
                s[0],
                s[1],
                s[2],
                s[3],
            ];
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": "1",
            "c1_tilde": self.c1_tilde,
            "tol": self.tol,
            "period": self.period,
            "period_estimates": self.period_estimates,
            "period_spread": self.period_spread(),
            "max_drift": self.max_drift(),
            "kappa_band": [self.band.0, self.band.1],
            "band_excess": self.band_excess(),
            "constraint_residual_max": self.constraint_max(),
            "samples": self.u_grid.len(),
        })
    }
}

fn kappa_system(_t: f64, y: &[f64], dy: &mut [f64]) {
    dy[0] = y[1];
    dy[1] = rhs_unchecked(y[0], y[1]);
}

// Crossing of κ' = 0 inside an accepted step, refined by secant iteration on
// κ'(τ) evaluated with a single Runge–Kutta step from the step start.
fn refine_crossing(solver: &Dopri5, s: &StepInfo) -> f64 {
    let h = s.t1 - s.t0;
    // cubic Hermite guess for the root of κ'
    let (p0, p1, m0, m1) = (s.y0[1], s.y1[1], s.f0[1] * h, s.f1[1] * h);
    let herm = |x: f64| {
        let x2 = x * x;
        let x3 = x2 * x;
        (2.0 * x3 - 3.0 * x2 + 1.0) * p0 + (x3 - 2.0 * x2 + x) * m0 + (-2.0 * x3 + 3.0 * x2) * p1 + (x3 - x2) * m1
    };
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if herm(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let g = |tau: f64| -> f64 {
        if tau == s.t0 {
            return s.y0[1];
        }
        solver.raw_step(&kappa_system, s.t0, s.y0, s.f0, tau - s.t0).0[1]
    };
    let mut x0 = s.t0 + a * h;
    let mut x1 = s.t0 + b * h;
    let (mut g0, mut g1) = (g(x0), g(x1));
    for _ in 0..30 {
        if g1 == g0 {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        if !x2.is_finite() {
            break;
        }
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = g(x1);
        if (x1 - x0).abs() <= 4.0 * f64::EPSILON * x1.abs().max(1.0) {
            break;
        }
    }
    x1
}

/// Integrates `κ` from `(κ_max, 0)` at `u = 0` for `n_periods` periods.
///
/// Every accepted step records the first-integral drift; periods are the
/// times between successive crossings of the section `{κ' = 0, κ'' < 0}`.
pub fn integrate_profile(c1: f64, n_periods: usize, tol: f64) -> Result<ProfileSolution> {
    let band = admissible_range(c1)?;
    if n_periods == 0 {
        return Err(Error::Input("need at least one period".into()));
    }
    if !(tol > 0.0 && tol < 1e-2) {
        return Err(Error::Input(format!("tolerance must lie in (0, 1e-2), got {tol}")));
    }
    let solver = Dopri5::new(tol);
    let y0 = [band.1, 0.0];
    let r0 = first_integral_residual(y0[0], y0[1], c1)?;
    let mut sol = ProfileSolution {
        c1_tilde: c1,
        tol,
        u_grid: vec![0.0],
        kappa: vec![y0[0]],
        kappa_prime: vec![0.0],
        drift: vec![0.0],
        max_step_drift: 0.0,
        period: None,
        period_estimates: Vec::new(),
        band,
        sigma: Vec::new(),
        frame: Vec::new(),
        constraint: Vec::new(),
    };
    let mut crossings = vec![0.0];
    let budget = 1e3 * tol;
    // generous horizon: the integration stops at the n-th crossing
    let horizon = 1e6;
    solver.integrate(
        kappa_system,
        0.0,
        &y0,
        horizon,
        1e-3,
        |_| {},
        |s| {
            let (k, kp) = (s.y1[0], s.y1[1]);
            if !(k > 0.0) {
                return Err(Error::Integration { u: s.t1, reason: format!("curvature left (0, inf): {k}") });
            }
            let drift = first_integral_residual(k, kp, c1)? - r0;
            if drift.abs() > budget {
                return Err(Error::Integration {
                    u: s.t1,
                    reason: format!("first-integral drift {drift:.3e} exceeds {budget:.1e}"),
                });
            }
            sol.u_grid.push(s.t1);
            sol.kappa.push(k);
            sol.kappa_prime.push(kp);
            sol.drift.push(drift);
            if s.y0[1] > 0.0 && s.y1[1] <= 0.0 && s.f1[1] < 0.0 {
                crossings.push(refine_crossing(&solver, s));
            }
            Ok(crossings.len() <= n_periods)
        },
    )?;
    if crossings.len() <= n_periods {
        return Err(Error::Integration { u: horizon, reason: "no periodic return detected".into() });
    }
    sol.max_step_drift = sol.max_drift();
    sol.period_estimates = crossings.windows(2).map(|w| w[1] - w[0]).collect();
    sol.period = Some(crossings[n_periods] / n_periods as f64);
    Ok(sol)
}

/// Integrates `κ` from `(κ_max, 0)` up to `u_end` (negative values integrate
/// backwards) and returns the final `(κ, κ')`.
pub fn integrate_kappa_to(c1: f64, u_end: f64, tol: f64) -> Result<(f64, f64)> {
    let band = admissible_range(c1)?;
    let (_, y, _) = Dopri5::new(tol).integrate(kappa_system, 0.0, &[band.1, 0.0], u_end, 1e-3, |_| {}, |_| Ok(true))?;
    Ok((y[0], y[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rhs_examples() {
        assert!(kappa_rhs(equilibrium_kappa(), 0.0).unwrap().abs() < 1e-15);
        assert!((kappa_rhs(1.0, 0.0).unwrap() + 8.0 / 3.0).abs() < 1e-15);
        assert!((kappa_rhs(1.0, 2.0).unwrap() - 13.0 / 3.0).abs() < 1e-14);
        assert!(kappa_rhs(0.0, 1.0).is_err());
        assert!(first_integral_residual(-1.0, 0.0, 20.0).is_err());
    }

    #[test]
    fn first_integral_examples() {
        let r = first_integral_residual(equilibrium_kappa(), 0.0, c1_bound()).unwrap();
        assert!(r.abs() < 1e-14);
        let r = first_integral_residual(1.0, 0.0, 20.0).unwrap();
        assert!((r + 20.0 / 9.0).abs() < 1e-13, "{r}");
    }

    #[test]
    fn bound_value() {
        assert!((c1_bound() - 16.2098).abs() < 1e-4);
        assert!(admissible_range(c1_bound()).is_err());
        assert!(admissible_range(16.0).is_err());
        let (lo, hi) = band_limits(c1_bound()).unwrap();
        assert!((lo - equilibrium_kappa()).abs() < 1e-9 && (hi - equilibrium_kappa()).abs() < 1e-9);
    }

    #[test]
    fn band_at_twenty() {
        let (lo, hi) = admissible_range(20.0).unwrap();
        assert!(lo < equilibrium_kappa() && equilibrium_kappa() < hi);
        assert!(band_polynomial(lo, 20.0).abs() < 1e-11);
        assert!(band_polynomial(hi, 20.0).abs() < 1e-11);
        for i in 1..100 {
            let k = lo + (hi - lo) * i as f64 / 100.0;
            assert!(band_polynomial(k, 20.0) > 0.0);
        }
        assert!(band_polynomial(0.9 * lo, 20.0) < 0.0 && band_polynomial(1.1 * hi, 20.0) < 0.0);
    }

    #[test]
    fn band_shrinks_towards_double_root() {
        let b = c1_bound();
        let mut last = f64::INFINITY;
        for e in [1e-1, 1e-3, 1e-5, 1e-7, 1e-9, 1e-11, 1e-13] {
            let (lo, hi) = admissible_range(b * (1.0 + e)).unwrap();
            assert!(hi - lo < last);
            last = hi - lo;
            assert!(lo <= equilibrium_kappa() + 1e-7 && hi >= equilibrium_kappa() - 1e-7);
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn period_and_drift() {
        let sol = integrate_profile(20.0, 10, 1e-10).unwrap();
        assert!(sol.max_drift() < 1e-8, "{}", sol.max_drift());
        assert!(sol.period_spread() < 1e-8, "{:?}", sol.period_estimates);
        assert!(sol.band_excess() < 1e-9);
    }

    #[test]
    fn drift_tracks_tolerance() {
        let mut last = f64::INFINITY;
        for tol in [1e-8, 1e-10, 1e-12] {
            let d = integrate_profile(20.0, 10, tol).unwrap().max_drift();
            assert!(d < 100.0 * tol && d < last, "tol {tol:e}: drift {d:e}");
            last = d;
        }
    }

    #[test]
    fn csv_and_summary() {
        let sol = reconstruct_sigma(20.0, 1, 16, 1e-10).unwrap();
        let csv = sol.to_csv();
        assert_eq!(csv.lines().count(), 18);
        assert!(csv.starts_with("u,kappa,kappa_prime,drift,sigma1,sigma2,sigma3,sigma4"));
        let js = sol.summary();
        assert!(js["period"].as_f64().unwrap() > 0.0);
        assert_eq!(js["kappa_band"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn time_reversal() {
        for u in [0.37, 1.3] {
            let a = integrate_kappa_to(20.0, u, 1e-11).unwrap();
            let b = integrate_kappa_to(20.0, -u, 1e-11).unwrap();
            assert!((a.0 - b.0).abs() < 1e-8 && (a.1 + b.1).abs() < 1e-8);
        }
    }

    proptest! {
        #[test]
        fn band_roots_are_roots(c1 in 16.3f64..200.0) {
            let (lo, hi) = admissible_range(c1).unwrap();
            let peak = (3.0 * c1 / 64.0).powi(2);
            prop_assert!(lo < peak && peak < hi);
            prop_assert!(reduced(lo, c1).abs() < 1e-9 * c1);
            prop_assert!(reduced(hi, c1).abs() < 1e-9 * c1);
        }

        #[test]
        fn first_integral_is_conserved_by_the_field(k in 0.2f64..2.0, kp in -2.0f64..2.0, c1 in 16.3f64..100.0) {
            // d/du (κ'² − P(κ)) = 2κ'κ'' − P'(κ)κ' must vanish where κ'² = P(κ);
            // the identity κ'' = P'/2 + ... holds only on the level set, so test the
            // derivative of P directly: P'(κ)/2 = κ'' evaluated with κ'² = P(κ).
            let p = band_polynomial(k, c1);
            prop_assume!(p > 1e-6);
            let kp_on = p.sqrt() * kp.signum();
            let dp = -(32.0 / 9.0) * k - 64.0 * k.powi(3) + 3.5 * c1 * k.powf(2.5);
            let lhs = 2.0 * kp_on * kappa_rhs(k, kp_on).unwrap();
            prop_assert!((lhs - dp * kp_on).abs() < 1e-9 * (1.0 + dp.abs() + lhs.abs()));
        }
    }
}
