use nalgebra::DVector;

use super::chart::Chart;
use super::stencil::StencilOrder;
use crate::error::{Error, Result};

/// Step and stencil used to differentiate chart maps pointwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetConfig {
    pub step: f64,
    pub order: StencilOrder,
}

impl Default for JetConfig {
    fn default() -> Self {
        Self {
            step: 1e-2,
            order: StencilOrder::Six,
        }
    }
}

/// Value, first and second chart derivatives of an immersion at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    pub value: DVector<f64>,
    /// `d1[i] = ∂_i Φ`
    pub d1: Vec<DVector<f64>>,
    /// `d2[i][j] = ∂_i ∂_j Φ`, symmetric by construction.
    pub d2: Vec<Vec<DVector<f64>>>,
}

impl Jet2 {
    pub fn dim(&self) -> usize {
        self.d1.len()
    }
}

/// Central-difference jet of `chart` at `x`.
pub fn jet<C: Chart + ?Sized>(chart: &C, x: &[f64], cfg: JetConfig) -> Result<Jet2> {
    let m = chart.dim();
    if x.len() != m {
        return Err(Error::Dimension { expected: m, got: x.len() });
    }
    if !(cfg.step > 0.0) {
        return Err(Error::Input(format!("jet step must be positive, got {}", cfg.step)));
    }
    let h = cfg.step;
    let w = cfg.order.half_width() as isize;
    let c1 = cfg.order.first();
    let c2 = cfg.order.second();

    let eval = |offsets: &[(usize, isize)]| -> Result<DVector<f64>> {
        let mut p = x.to_vec();
        for &(axis, k) in offsets {
            p[axis] += k as f64 * h;
        }
        let v = chart.eval(&p);
        if v.iter().all(|c| c.is_finite()) {
            Ok(v)
        } else {
            Err(Error::Evaluation { at: p })
        }
    };

    let value = eval(&[])?;
    let n = value.len();
    let mut d1 = vec![DVector::zeros(n); m];
    let mut d2 = vec![vec![DVector::zeros(n); m]; m];

    for i in 0..m {
        let mut first = DVector::zeros(n);
        let mut second = DVector::zeros(n);
        for (k, (a, b)) in (-w..=w).zip(c1.iter().zip(c2)) {
            let v = if k == 0 { value.clone() } else { eval(&[(i, k)])? };
            first.axpy(*a, &v, 1.0);
            second.axpy(*b, &v, 1.0);
        }
        d1[i] = first / h;
        d2[i][i] = second / (h * h);
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let mut mixed = DVector::zeros(n);
            for (ki, ci) in (-w..=w).zip(c1) {
                if *ci == 0.0 {
                    continue;
                }
                for (kj, cj) in (-w..=w).zip(c1) {
                    if *cj == 0.0 {
                        continue;
                    }
                    let v = eval(&[(i, ki), (j, kj)])?;
                    mixed.axpy(ci * cj, &v, 1.0);
                }
            }
            mixed /= h * h;
            d2[i][j] = mixed.clone();
            d2[j][i] = mixed;
        }
    }
    Ok(Jet2 { value, d1, d2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::FnChart;

    #[test]
    fn affine_chart_has_exact_jet() {
        let chart = FnChart::new(2, 3, |x: &[f64]| DVector::from_vec(vec![x[0], x[1], 0.0]));
        let j = jet(&chart, &[0.3, -0.7], JetConfig::default()).unwrap();
        assert!((&j.d1[0] - DVector::from_vec(vec![1.0, 0.0, 0.0])).amax() < 1e-13);
        assert!((&j.d1[1] - DVector::from_vec(vec![0.0, 1.0, 0.0])).amax() < 1e-13);
        for i in 0..2 {
            for k in 0..2 {
                assert!(j.d2[i][k].amax() < 1e-11);
            }
        }
    }

    #[test]
    fn circle_jet() {
        let chart = FnChart::new(1, 2, |x: &[f64]| DVector::from_vec(vec![x[0].cos(), x[0].sin()]));
        for order in [StencilOrder::Four, StencilOrder::Six] {
            let cfg = JetConfig { step: 1e-2, order };
            let j = jet(&chart, &[0.0], cfg).unwrap();
            assert!((j.d1[0][0]).abs() < 1e-12 && (j.d1[0][1] - 1.0).abs() < 1e-9);
            assert!((j.d2[0][0][0] + 1.0).abs() < 1e-8 && j.d2[0][0][1].abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_partials_are_symmetric() {
        let chart = FnChart::new(2, 1, |x: &[f64]| DVector::from_vec(vec![(x[0] * x[1]).sin()]));
        let j = jet(&chart, &[0.4, 0.9], JetConfig::default()).unwrap();
        assert_eq!(j.d2[0][1], j.d2[1][0]);
        let exact = (0.36f64).cos() - 0.36 * (0.36f64).sin();
        assert!((j.d2[0][1][0] - exact).abs() < 1e-9);
    }

    #[test]
    fn non_finite_value_reports_node() {
        let chart = FnChart::new(1, 1, |x: &[f64]| DVector::from_vec(vec![x[0].ln()]));
        match jet(&chart, &[0.01], JetConfig::default()) {
            Err(Error::Evaluation { at }) => assert!(at[0] <= 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn refinement_reduces_error_by_order() {
        let chart = FnChart::new(1, 1, |x: &[f64]| DVector::from_vec(vec![(2.0 * x[0]).exp()]));
        let err = |h: f64| {
            let j = jet(&chart, &[0.1], JetConfig { step: h, order: StencilOrder::Four }).unwrap();
            let e = (0.2f64).exp();
            ((j.d1[0][0] - 2.0 * e).abs(), (j.d2[0][0][0] - 4.0 * e).abs())
        };
        let (a1, a2) = err(0.1);
        let (b1, b2) = err(0.05);
        assert!(a1 / b1 >= 8.0 && a2 / b2 >= 8.0);
    }
}
