use nalgebra::DMatrix;

use super::chart::Chart;
use super::jet::{jet, Jet2, JetConfig};
use crate::ambient::AmbientSpace;
use crate::error::{Error, Result};

pub const MIN_METRIC_DET: f64 = 1e-14;

/// Induced metric at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricData {
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub det: f64,
}

/// `g_ij = <∂_i Φ, ∂_j Φ>` in the model inner product.
pub fn metric(jet: &Jet2, space: &AmbientSpace) -> Result<MetricData> {
    let m = jet.dim();
    let g = DMatrix::from_fn(m, m, |i, j| space.dot(jet.d1[i].as_slice(), jet.d1[j].as_slice()));
    let g = (&g + g.transpose()) * 0.5;
    let det = g.determinant();
    if !(det > MIN_METRIC_DET) {
        return Err(Error::DegenerateChart {
            det,
            at: jet.value.iter().copied().collect(),
        });
    }
    let g_inv = g.clone().try_inverse().ok_or(Error::DegenerateChart {
        det,
        at: jet.value.iter().copied().collect(),
    })?;
    let g_inv = (&g_inv + g_inv.transpose()) * 0.5;
    Ok(MetricData { g, g_inv, det })
}

/// Christoffel symbols `Γ^k_ij`, stored `k`-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    m: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(m: usize) -> Self {
        Self { m, data: vec![0.0; m * m * m] }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.m + i) * self.m + j]
    }

    fn set(&mut self, k: usize, i: usize, j: usize, v: f64) {
        let m = self.m;
        self.data[(k * m + i) * m + j] = v;
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn from_lowered(lowered: impl Fn(usize, usize, usize) -> f64, g_inv: &DMatrix<f64>, m: usize) -> Christoffel {
    let mut out = Christoffel::zeros(m);
    for k in 0..m {
        for i in 0..m {
            for j in i..m {
                let v: f64 = (0..m).map(|l| g_inv[(k, l)] * lowered(i, j, l)).sum();
                out.set(k, i, j, v);
                out.set(k, j, i, v);
            }
        }
    }
    out
}

/// `Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)` with metric derivatives
/// taken by the jet's stencil over neighbouring jets.
pub fn christoffel<C: Chart + ?Sized>(
    chart: &C,
    space: &AmbientSpace,
    x: &[f64],
    cfg: JetConfig,
) -> Result<Christoffel> {
    let m = chart.dim();
    let centre = metric(&jet(chart, x, cfg)?, space)?;
    let w = cfg.order.half_width() as isize;
    let c1 = cfg.order.first();
    // dg[l] = ∂_l g
    let mut dg = Vec::with_capacity(m);
    for l in 0..m {
        let mut acc = DMatrix::zeros(m, m);
        for (k, c) in (-w..=w).zip(c1) {
            if *c == 0.0 {
                continue;
            }
            let mut p = x.to_vec();
            p[l] += k as f64 * cfg.step;
            let md = metric(&jet(chart, &p, cfg)?, space)?;
            acc += md.g * *c;
        }
        dg.push(acc / cfg.step);
    }
    Ok(from_lowered(
        |i, j, l| 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]),
        &centre.g_inv,
        m,
    ))
}

/// `Γ^k_ij = g^{kl} <∂_i∂_j Φ, ∂_l Φ>`, valid for any immersion into a flat
/// (possibly Lorentzian) host. Independent of [`christoffel`]'s route.
pub fn christoffel_from_jet(jet: &Jet2, metric: &MetricData, space: &AmbientSpace) -> Christoffel {
    let m = jet.dim();
    from_lowered(
        |i, j, l| space.dot(jet.d2[i][j].as_slice(), jet.d1[l].as_slice()),
        &metric.g_inv,
        m,
    )
}
