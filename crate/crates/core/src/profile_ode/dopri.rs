//! Dormand–Prince 5(4) with PI step-size control.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One accepted step, handed to observers.
pub struct StepInfo<'a> {
    pub t0: f64,
    pub y0: &'a [f64],
    pub f0: &'a [f64],
    pub t1: f64,
    pub y1: &'a [f64],
    pub f1: &'a [f64],
}

/// Adaptive explicit Runge–Kutta integrator (order 5, embedded order 4).
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Control the local error per unit step (error ≤ tol·|h| for |h| < 1),
    /// which makes the global error proportional to the tolerance.
    pub per_unit_step: bool,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, h_max: f64::INFINITY, max_steps: 10_000_000, per_unit_step: true }
    }

    /// Single step of size `h`; returns the fifth-order state and the error estimate.
    pub fn raw_step<F>(&self, f: &F, t: f64, y: &[f64], f0: &[f64], h: f64) -> (Vec<f64>, Vec<f64>)
    where
        F: Fn(f64, &[f64], &mut [f64]),
    {
        let n = y.len();
        let mut k: Vec<Vec<f64>> = vec![f0.to_vec()];
        let mut tmp = vec![0.0; n];
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate() {
                    acc += h * A[s][j] * kj[i];
                }
                tmp[i] = acc;
            }
            let mut ks = vec![0.0; n];
            f(t + C[s] * h, &tmp, &mut ks);
            k.push(ks);
        }
        // the last stage is evaluated at the fifth-order solution
        let y1 = tmp;
        let mut err = vec![0.0; n];
        for i in 0..n {
            err[i] = h * k.iter().zip(E).map(|(kj, e)| e * kj[i]).sum::<f64>();
        }
        (y1, err)
    }

    fn error_norm(&self, y0: &[f64], y1: &[f64], err: &[f64]) -> f64 {
        let n = y0.len() as f64;
        let s: f64 = y0
            .iter()
            .zip(y1)
            .zip(err)
            .map(|((a, b), e)| {
                let sc = self.atol + self.rtol * a.abs().max(b.abs());
                (e / sc).powi(2)
            })
            .sum();
        (s / n).sqrt()
    }

    /// Integrates from `t0` to exactly `t1` (either direction).
    ///
    /// `project` may adjust each accepted state (constraint projection) before
    /// it is observed and used as the next starting point; `observe` may stop
    /// the integration early by returning `false`. Returns the final time and state.
    #[allow(clippy::too_many_arguments)]
    pub fn integrate<F, P, O>(
        &self,
        f: F,
        t0: f64,
        y0: &[f64],
        t1: f64,
        h_init: f64,
        mut project: P,
        mut observe: O,
    ) -> Result<(f64, Vec<f64>, f64)>
    where
        F: Fn(f64, &[f64], &mut [f64]),
        P: FnMut(&mut [f64]),
        O: FnMut(&StepInfo) -> Result<bool>,
    {
        let dir = if t1 >= t0 { 1.0 } else { -1.0 };
        let mut t = t0;
        let mut y = y0.to_vec();
        let mut fy = vec![0.0; y.len()];
        f(t, &y, &mut fy);
        let mut h = h_init.abs().min(self.h_max).max(1e-12) * dir;
        let mut err_prev: f64 = 1e-4;
        let k = if self.per_unit_step { 4.0 } else { 5.0 };
        let mut steps = 0usize;
        while (t1 - t) * dir > 0.0 {
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::Integration { u: t, reason: "step budget exhausted".into() });
            }
            let mut last = false;
            if (t + h - t1) * dir >= 0.0 {
                h = t1 - t;
                last = true;
            }
            let (mut y1, err) = self.raw_step(&f, t, &y, &fy, h);
            let mut en = self.error_norm(&y, &y1, &err);
            if self.per_unit_step {
                en /= h.abs().min(1.0);
            }
            if !en.is_finite() {
                h *= 0.25;
                if h.abs() < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::Integration { u: t, reason: "non-finite state".into() });
                }
                continue;
            }
            if en <= 1.0 {
                let fac = (0.9 * en.max(1e-10).powf(-1.0 / k + 0.2 / k) * err_prev.powf(0.2 / k)).clamp(0.2, 10.0);
                err_prev = en.max(1e-4);
                project(&mut y1);
                let mut f1 = vec![0.0; y1.len()];
                let t_new = if last { t1 } else { t + h };
                f(t_new, &y1, &mut f1);
                let go_on = observe(&StepInfo { t0: t, y0: &y, f0: &fy, t1: t_new, y1: &y1, f1: &f1 })?;
                t = t_new;
                y = y1;
                fy = f1;
                if !go_on {
                    break;
                }
                let h_next = (h.abs() * fac).min(self.h_max);
                h = h_next * dir;
            } else {
                let fac = (0.9 * en.powf(-1.0 / k)).clamp(0.2, 1.0);
                h *= fac;
                if h.abs() < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::Integration { u: t, reason: "step size underflow".into() });
                }
            }
        }
        Ok((t, y, h.abs()))
    }
}
