//! Profile curve `σ` on the unit 2-sphere with geodesic curvature `κ`, and the
//! rotational surface it generates in the 3-sphere.

use nalgebra::DVector;

use super::{first_integral_residual, integrate_profile, rhs_unchecked, Dopri5, ProfileSolution};
use crate::calculus::Chart;
use crate::error::{Error, Result};

const STATE: usize = 8;
const SUBSTEPS: usize = 8;

/// Radius of the orbit through `σ(u)`: `4κ^{-3/4}/(3√C̃₁)`.
pub fn orbit_radius(kappa: f64, c1: f64) -> f64 {
    4.0 * kappa.powf(-0.75) / (3.0 * c1.sqrt())
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

// state: κ, κ', σ (3), T (3)
fn full_system(_t: f64, y: &[f64], dy: &mut [f64]) {
    dy[0] = y[1];
    dy[1] = rhs_unchecked(y[0], y[1]);
    let n = cross(&y[2..5], &y[5..8]);
    for i in 0..3 {
        dy[2 + i] = y[5 + i];
        dy[5 + i] = -y[2 + i] + y[0] * n[i];
    }
}

// Frenet system on the sphere with prescribed zero curvature.
fn geodesic_system(_t: f64, y: &[f64], dy: &mut [f64]) {
    for i in 0..3 {
        dy[i] = y[3 + i];
        dy[3 + i] = -y[i];
    }
}

fn project_frame(s: &mut [f64], t: &mut [f64]) {
    let ns = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    s.iter_mut().for_each(|x| *x /= ns);
    let d = s[0] * t[0] + s[1] * t[1] + s[2] * t[2];
    for i in 0..3 {
        t[i] -= d * s[i];
    }
    let nt = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
    t.iter_mut().for_each(|x| *x /= nt);
}

fn project_state(y: &mut [f64]) {
    let (head, tail) = y.split_at_mut(5);
    project_frame(&mut head[2..5], &mut tail[..3]);
}

fn initial_state(c1: f64, kappa0: f64) -> [f64; STATE] {
    let x1 = orbit_radius(kappa0, c1);
    [kappa0, 0.0, x1, (1.0 - x1 * x1).sqrt(), 0.0, 0.0, 0.0, 1.0]
}

/// Integrates `κ` together with `σ` and its unit tangent on a uniform
/// lattice of `samples_per_period` points per period over `n_periods` periods.
///
/// `σ(0) = (x₁, √(1 − x₁²), 0)` with `x₁ = 4κ(0)^{-3/4}/(3√C̃₁)` and
/// `T(0) = e₃`; the constraint `⟨σ, e₁⟩ = 4κ^{-3/4}/(3√C̃₁)` is recorded
/// per sample.
pub fn reconstruct_sigma(c1: f64, n_periods: usize, samples_per_period: usize, tol: f64) -> Result<ProfileSolution> {
    if samples_per_period < 4 {
        return Err(Error::Input("need at least 4 samples per period".into()));
    }
    let base = integrate_profile(c1, n_periods, tol)?;
    let period = base.period.expect("period detected");
    let du = period / samples_per_period as f64;
    let total = n_periods * samples_per_period;
    let solver = Dopri5::new(tol.min(1e-12));

    let mut y = initial_state(c1, base.band.1).to_vec();
    let r0 = first_integral_residual(y[0], y[1], c1)?;
    let mut out = ProfileSolution {
        u_grid: Vec::with_capacity(total + 1),
        kappa: Vec::with_capacity(total + 1),
        kappa_prime: Vec::with_capacity(total + 1),
        drift: Vec::with_capacity(total + 1),
        sigma: Vec::with_capacity(total + 1),
        frame: Vec::with_capacity(total + 1),
        constraint: Vec::with_capacity(total + 1),
        ..base
    };
    let mut h = 1e-3;
    for k in 0..=total {
        let u = k as f64 * du;
        if k > 0 {
            let (_, y1, h1) = solver.integrate(full_system, u - du, &y, u, h, project_state, |_| Ok(true))?;
            y = y1;
            h = h1.max(1e-4 * du);
        }
        if !(y[0] > 0.0) {
            return Err(Error::Integration { u, reason: format!("curvature left (0, inf): {}", y[0]) });
        }
        out.u_grid.push(u);
        out.kappa.push(y[0]);
        out.kappa_prime.push(y[1]);
        out.drift.push(first_integral_residual(y[0], y[1], c1)? - r0);
        out.sigma.push([y[2], y[3], y[4], 0.0]);
        out.frame.push([y[5], y[6], y[7], 0.0]);
        out.constraint.push(y[2] - orbit_radius(y[0], c1));
    }
    Ok(out)
}

/// Integrates the spherical Frenet system with curvature identically zero for
/// length `len`; the result is a great circle. Returns `(σ, T)` at the end.
pub fn geodesic_diagnostic(sigma0: [f64; 3], t0: [f64; 3], len: f64, tol: f64) -> Result<([f64; 3], [f64; 3])> {
    let mut y0 = [sigma0[0], sigma0[1], sigma0[2], t0[0], t0[1], t0[2]];
    let (a, b) = y0.split_at_mut(3);
    project_frame(a, b);
    let (_, y, _) = Dopri5::new(tol).integrate(
        geodesic_system,
        0.0,
        &y0,
        len,
        1e-2,
        |y: &mut [f64]| {
            let (a, b) = y.split_at_mut(3);
            project_frame(a, b);
        },
        |_| Ok(true),
    )?;
    Ok(([y[0], y[1], y[2]], [y[3], y[4], y[5]]))
}

/// Chart `(u, v) ↦ σ(u) + ρ(u) (e₁(cos v − 1) + e₄ sin v)` in `R⁴`, with
/// `ρ = 4κ^{-3/4}/(3√C̃₁)`.
///
/// `σ` between lattice points is obtained from the nearest lattice state by
/// classical Runge–Kutta substeps. Outside the integrated span `eval`
/// returns NaN; [`ProfileChart::try_eval`] reports the range instead.
#[derive(Debug, Clone)]
pub struct ProfileChart {
    c1: f64,
    u0: f64,
    du: f64,
    anchors: Vec<[f64; STATE]>,
    period: f64,
}

/// Builds the surface chart from a solution produced by [`reconstruct_sigma`].
pub fn assemble_surface(sol: &ProfileSolution) -> Result<ProfileChart> {
    let n = sol.u_grid.len();
    if n < 2 || sol.sigma.len() != n || sol.frame.len() != n {
        return Err(Error::Input("solution carries no profile curve; use reconstruct_sigma".into()));
    }
    let anchors = (0..n)
        .map(|i| {
            let (s, t) = (sol.sigma[i], sol.frame[i]);
            [sol.kappa[i], sol.kappa_prime[i], s[0], s[1], s[2], t[0], t[1], t[2]]
        })
        .collect();
    Ok(ProfileChart {
        c1: sol.c1_tilde,
        u0: sol.u_grid[0],
        du: sol.u_grid[1] - sol.u_grid[0],
        anchors,
        period: sol.period.unwrap_or(f64::NAN),
    })
}

impl ProfileChart {
    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Integrated span `[lo, hi]` of the profile parameter.
    pub fn span(&self) -> (f64, f64) {
        (self.u0, self.u0 + self.du * (self.anchors.len() - 1) as f64)
    }

    /// `(κ, κ', σ, T)` at `u`.
    pub fn state(&self, u: f64) -> Result<[f64; STATE]> {
        let (lo, hi) = self.span();
        if !(u >= lo && u <= hi) {
            return Err(Error::Range { u, lo, hi });
        }
        let k = (((u - self.u0) / self.du).round() as usize).min(self.anchors.len() - 1);
        let uk = self.u0 + k as f64 * self.du;
        let mut y = self.anchors[k];
        if u == uk {
            return Ok(y);
        }
        let h = (u - uk) / SUBSTEPS as f64;
        let mut t = uk;
        let (mut k1, mut k2, mut k3, mut k4, mut tmp) = ([0.0; STATE], [0.0; STATE], [0.0; STATE], [0.0; STATE], [0.0; STATE]);
        for _ in 0..SUBSTEPS {
            full_system(t, &y, &mut k1);
            (0..STATE).for_each(|i| tmp[i] = y[i] + 0.5 * h * k1[i]);
            full_system(t + 0.5 * h, &tmp, &mut k2);
            (0..STATE).for_each(|i| tmp[i] = y[i] + 0.5 * h * k2[i]);
            full_system(t + 0.5 * h, &tmp, &mut k3);
            (0..STATE).for_each(|i| tmp[i] = y[i] + h * k3[i]);
            full_system(t + h, &tmp, &mut k4);
            (0..STATE).for_each(|i| y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
            t += h;
        }
        Ok(y)
    }

    pub fn try_eval(&self, u: f64, v: f64) -> Result<[f64; 4]> {
        let y = self.state(u)?;
        let rho = orbit_radius(y[0], self.c1);
        Ok([y[2] + rho * (v.cos() - 1.0), y[3], y[4], rho * v.sin()])
    }
}

impl Chart for ProfileChart {
    fn dim(&self) -> usize {
        2
    }

    fn embedding_dim(&self) -> usize {
        4
    }

    fn eval(&self, x: &[f64]) -> DVector<f64> {
        match self.try_eval(x[0], x[1]) {
            Ok(p) => DVector::from_row_slice(&p),
            Err(_) => DVector::from_element(4, f64::NAN),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn great_circle_diagnostic() {
        let s0 = [0.6, 0.8, 0.0];
        let t0 = [0.0, 0.0, 1.0];
        let (s, t) = geodesic_diagnostic(s0, t0, 1.1, 1e-12).unwrap();
        let exp = [0.6 * 1.1f64.cos(), 0.8 * 1.1f64.cos(), 1.1f64.sin()];
        for i in 0..3 {
            assert!((s[i] - exp[i]).abs() < 1e-10);
        }
        // stays in the plane spanned by σ(0), T(0)
        let n = cross(&s0, &t0);
        assert!((n[0] * s[0] + n[1] * s[1] + n[2] * s[2]).abs() < 1e-12);
        assert!((t[0] * s[0] + t[1] * s[1] + t[2] * s[2]).abs() < 1e-12);
    }

    #[test]
    fn profile_lies_on_sphere_and_keeps_constraint() {
        let sol = reconstruct_sigma(20.0, 2, 128, 1e-10).unwrap();
        assert!(sol.constraint_max() < 1e-8, "{}", sol.constraint_max());
        assert!(sol.max_drift() < 1e-8);
        let chart = assemble_surface(&sol).unwrap();
        let p = sol.period.unwrap();
        for &(u, v) in &[(0.1 * p, 0.3), (0.77 * p, 2.0), (1.5 * p, -1.0)] {
            let y = chart.try_eval(u, v).unwrap();
            let r: f64 = y.iter().map(|x| x * x).sum();
            assert!((r - 1.0).abs() < 1e-8, "{r}");
        }
        assert!(matches!(chart.try_eval(-0.1, 0.0), Err(Error::Range { .. })));
        assert!(chart.eval(&[3.0 * p, 0.0])[0].is_nan());
    }

    #[test]
    fn dense_evaluation_matches_lattice() {
        let coarse = reconstruct_sigma(20.0, 1, 64, 1e-11).unwrap();
        let fine = reconstruct_sigma(20.0, 1, 128, 1e-11).unwrap();
        let chart = assemble_surface(&coarse).unwrap();
        for i in (1..128).step_by(2) {
            let s = chart.state(fine.u_grid[i]).unwrap();
            for j in 0..3 {
                assert!((s[2 + j] - fine.sigma[i][j]).abs() < 1e-9);
            }
        }
    }
}
