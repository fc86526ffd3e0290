use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_COUNT: usize = 9;

/// One chart-coordinate axis.
///
/// A periodic axis samples `[lo, hi)` with `hi - lo` the period, so its
/// spacing is `(hi - lo) / count` and stencils wrap around. A closed axis
/// samples `[lo, hi]` inclusive with spacing `(hi - lo) / (count - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub periodic: bool,
}

impl Axis {
    pub fn closed(lo: f64, hi: f64, count: usize) -> Self {
        Self { lo, hi, count, periodic: false }
    }

    pub fn periodic(lo: f64, hi: f64, count: usize) -> Self {
        Self { lo, hi, count, periodic: true }
    }

    pub fn spacing(&self) -> f64 {
        if self.periodic {
            (self.hi - self.lo) / self.count as f64
        } else {
            (self.hi - self.lo) / (self.count - 1) as f64
        }
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.spacing()
    }
}

/// Rectangular sampling of a chart domain, nodes stored with axis 0 slowest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartGrid {
    axes: Vec<Axis>,
    margin: usize,
    #[serde(skip)]
    strides: Vec<usize>,
}

impl ChartGrid {
    /// Builds a grid; `margin` boundary layers of closed axes are excluded from reports.
    pub fn new(axes: Vec<Axis>, margin: usize) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::Input(format!(
                "grid dimension must be 1..=3, got {}",
                axes.len()
            )));
        }
        for (k, a) in axes.iter().enumerate() {
            if a.count < MIN_COUNT {
                return Err(Error::Input(format!(
                    "axis {k}: count {} below minimum {MIN_COUNT}",
                    a.count
                )));
            }
            if !(a.hi > a.lo) || !a.lo.is_finite() || !a.hi.is_finite() {
                return Err(Error::Input(format!(
                    "axis {k}: empty range [{}, {}]",
                    a.lo, a.hi
                )));
            }
            if !a.periodic && a.count < 2 * margin + 1 {
                return Err(Error::Input(format!(
                    "axis {k}: {} nodes leave no interior with margin {margin}",
                    a.count
                )));
            }
        }
        let mut strides = vec![1; axes.len()];
        for k in (0..axes.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * axes[k + 1].count;
        }
        Ok(Self { axes, margin, strides })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.axes[axis].spacing()
    }

    pub fn multi_index(&self, node: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.axes)
            .map(|(s, a)| (node / s) % a.count)
            .collect()
    }

    pub fn coords(&self, node: usize) -> Vec<f64> {
        self.multi_index(node)
            .iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.coord(i))
            .collect()
    }

    /// Node `offset` steps away along `axis`, wrapping on periodic axes.
    pub fn neighbor(&self, node: usize, axis: usize, offset: isize) -> Option<usize> {
        let a = &self.axes[axis];
        let i = ((node / self.strides[axis]) % a.count) as isize;
        let n = a.count as isize;
        let j = i + offset;
        let j = if a.periodic {
            j.rem_euclid(n)
        } else if (0..n).contains(&j) {
            j
        } else {
            return None;
        };
        Some((node as isize + (j - i) * self.strides[axis] as isize) as usize)
    }

    /// True when the node is at least `margin` layers inside every closed axis.
    pub fn is_interior(&self, node: usize) -> bool {
        self.multi_index(node)
            .iter()
            .zip(&self.axes)
            .all(|(&i, a)| a.periodic || (i >= self.margin && i + self.margin < a.count))
    }

    /// Same axes with every count changed by `f`; used for refinement studies.
    pub fn map_counts(&self, f: impl Fn(&Axis) -> usize) -> Result<Self> {
        let axes = self
            .axes
            .iter()
            .map(|a| Axis { count: f(a), ..a.clone() })
            .collect();
        Self::new(axes, self.margin)
    }
}
