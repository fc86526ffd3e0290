use super::grid::ChartGrid;
use super::stencil::StencilOrder;

/// One scalar per grid node. Nodes outside the region where the field is
/// defined hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFieldSample {
    pub values: Vec<f64>,
}

impl ScalarFieldSample {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn from_fn(grid: &ChartGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::new((0..grid.len()).map(|n| f(&grid.coords(n))).collect())
    }

    pub fn constant(grid: &ChartGrid, c: f64) -> Self {
        Self::new(vec![c; grid.len()])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_defined(&self, node: usize) -> bool {
        self.values[node].is_finite()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }
}

impl std::ops::Index<usize> for ScalarFieldSample {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Stencil differentiation of grid fields along chart axes.
///
/// With Richardson extrapolation enabled, each derivative combines the
/// order-`p` stencil at spacing `h` and `2h` as `(2^p D_h - D_2h) / (2^p - 1)`,
/// raising the order by two at the cost of a wider footprint.
#[derive(Debug, Clone, Copy)]
pub struct Differentiator<'g> {
    grid: &'g ChartGrid,
    order: StencilOrder,
    richardson: bool,
}

impl<'g> Differentiator<'g> {
    pub fn new(grid: &'g ChartGrid, order: StencilOrder, richardson: bool) -> Self {
        Self { grid, order, richardson }
    }

    pub fn grid(&self) -> &'g ChartGrid {
        self.grid
    }

    pub fn richardson(&self) -> bool {
        self.richardson
    }

    /// Number of layers a single derivative consumes on a closed axis.
    pub fn reach(&self) -> usize {
        let w = self.order.half_width();
        if self.richardson {
            2 * w
        } else {
            w
        }
    }

    fn apply(&self, field: &ScalarFieldSample, axis: usize, weights: &[f64], power: i32) -> ScalarFieldSample {
        let h = self.grid.spacing(axis);
        let w = self.order.half_width() as isize;
        let raw = |node: usize, stride: isize| -> f64 {
            let mut acc = 0.0;
            for (k, c) in (-w..=w).zip(weights) {
                if *c == 0.0 {
                    continue;
                }
                match self.grid.neighbor(node, axis, k * stride) {
                    Some(nb) => acc += c * field.values[nb],
                    None => return f64::NAN,
                }
            }
            acc / (h * stride as f64).powi(power)
        };
        let values = (0..self.grid.len())
            .map(|node| {
                let fine = raw(node, 1);
                if !self.richardson {
                    return fine;
                }
                let coarse = raw(node, 2);
                let gain = f64::from(1u32 << self.order.order());
                (gain * fine - coarse) / (gain - 1.0)
            })
            .collect();
        ScalarFieldSample::new(values)
    }

    /// `∂_axis f`.
    pub fn d1(&self, field: &ScalarFieldSample, axis: usize) -> ScalarFieldSample {
        self.apply(field, axis, self.order.first(), 1)
    }

    /// `∂_a ∂_b f`; pure second derivatives use the direct stencil, mixed
    /// ones iterate first-derivative stencils.
    pub fn d2(&self, field: &ScalarFieldSample, a: usize, b: usize) -> ScalarFieldSample {
        if a == b {
            self.apply(field, a, self.order.second(), 2)
        } else {
            self.d1(&self.d1(field, a), b)
        }
    }

    /// All first partials.
    pub fn gradient_components(&self, field: &ScalarFieldSample) -> Vec<ScalarFieldSample> {
        (0..self.grid.dim()).map(|a| self.d1(field, a)).collect()
    }

    /// Flat chart Laplacian `Σ ∂_a² f` (analysts' sign).
    pub fn flat_laplacian(&self, field: &ScalarFieldSample) -> ScalarFieldSample {
        let mut acc = self.d2(field, 0, 0);
        for a in 1..self.grid.dim() {
            acc = acc.zip_with(&self.d2(field, a, a), |x, y| x + y);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::grid::Axis;

    fn max_err(f: &ScalarFieldSample, exact: impl Fn(&[f64]) -> f64, grid: &ChartGrid) -> f64 {
        (0..grid.len())
            .filter(|&n| f.is_defined(n))
            .map(|n| (f[n] - exact(&grid.coords(n))).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn derivatives_of_polynomials_are_exact() {
        let grid = ChartGrid::new(vec![Axis::closed(-1.0, 1.0, 17), Axis::closed(0.0, 2.0, 17)], 2)
            .unwrap();
        let f = ScalarFieldSample::from_fn(&grid, |x| x[0].powi(3) * x[1] + x[1].powi(2));
        let d = Differentiator::new(&grid, StencilOrder::Four, false);
        let fx = d.d1(&f, 0);
        assert!(max_err(&fx, |x| 3.0 * x[0] * x[0] * x[1], &grid) < 1e-12);
        let fxy = d.d2(&f, 0, 1);
        assert!(max_err(&fxy, |x| 3.0 * x[0] * x[0], &grid) < 1e-12);
        let fyy = d.d2(&f, 1, 1);
        assert!(max_err(&fyy, |_| 2.0, &grid) < 1e-11);
        // stencil footprint leaves boundary nodes undefined
        assert!(!fx.is_defined(0));
        assert!(fx.is_defined(2 * 17 + 5));
    }

    #[test]
    fn periodic_axis_has_no_margin() {
        let grid = ChartGrid::new(
            vec![Axis::periodic(0.0, std::f64::consts::TAU, 64)],
            2,
        )
        .unwrap();
        let f = ScalarFieldSample::from_fn(&grid, |x| x[0].sin());
        let d = Differentiator::new(&grid, StencilOrder::Four, false);
        let fx = d.d1(&f, 0);
        assert!((0..64).all(|n| fx.is_defined(n)));
        assert!(max_err(&fx, |x| x[0].cos(), &grid) < 1e-5);
    }

    #[test]
    fn richardson_improves_order() {
        let err = |n: usize, rich: bool| {
            let grid = ChartGrid::new(vec![Axis::closed(0.0, 1.0, n)], 2).unwrap();
            let f = ScalarFieldSample::from_fn(&grid, |x| (3.0 * x[0]).exp());
            let d = Differentiator::new(&grid, StencilOrder::Four, rich);
            max_err(&d.d2(&f, 0, 0), |x| 9.0 * (3.0 * x[0]).exp(), &grid)
        };
        let (a, b) = (err(33, false), err(65, false));
        assert!(a / b > 12.0, "order-4 ratio {}", a / b);
        let (a, b) = (err(33, true), err(65, true));
        assert!(a / b > 40.0, "richardson ratio {}", a / b);
        assert!(err(65, true) < err(65, false));
    }
}
