//! Central finite-difference weights.

/// Accuracy order of a central stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StencilOrder {
    #[default]
    Four,
    Six,
}

impl StencilOrder {
    /// Number of points on each side of the centre.
    pub fn half_width(self) -> usize {
        match self {
            StencilOrder::Four => 2,
            StencilOrder::Six => 3,
        }
    }

    pub fn order(self) -> u32 {
        match self {
            StencilOrder::Four => 4,
            StencilOrder::Six => 6,
        }
    }

    /// First-derivative weights for offsets `-w..=w` (divide by `h`).
    pub fn first(self) -> &'static [f64] {
        match self {
            StencilOrder::Four => &FIRST_4,
            StencilOrder::Six => &FIRST_6,
        }
    }

    /// Second-derivative weights for offsets `-w..=w` (divide by `h^2`).
    pub fn second(self) -> &'static [f64] {
        match self {
            StencilOrder::Four => &SECOND_4,
            StencilOrder::Six => &SECOND_6,
        }
    }
}

const FIRST_4: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
const SECOND_4: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
const FIRST_6: [f64; 7] = [
    -1.0 / 60.0,
    9.0 / 60.0,
    -45.0 / 60.0,
    0.0,
    45.0 / 60.0,
    -9.0 / 60.0,
    1.0 / 60.0,
];
const SECOND_6: [f64; 7] = [
    2.0 / 180.0,
    -27.0 / 180.0,
    270.0 / 180.0,
    -490.0 / 180.0,
    270.0 / 180.0,
    -27.0 / 180.0,
    2.0 / 180.0,
];
