//! Small 2-D geometry and dense-grid helpers used by the perception stack.

use serde::{Deserialize, Serialize};

/// A point or displacement in frame coordinates (grid cells, continuous).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn add(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Vec2) -> f64 {
        self.sub(other).norm()
    }

    /// Unit vector in the same direction, or zero when degenerate.
    pub fn unit(self) -> Vec2 {
        let n = self.norm();
        if n > 0.0 {
            self.scale(1.0 / n)
        } else {
            Vec2::ZERO
        }
    }
}

/// Dense row-major grid of `f64` values over a `width x height` frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2 {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Grid2 {
    pub fn new(width: usize, height: usize) -> Self {
        Grid2 { width, height, data: vec![0.0; width * height] }
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Grid2 { width, height, data: vec![value; width * height] }
    }

    pub fn from_data(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height, "grid data length mismatch");
        Grid2 { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[self.idx(x, y)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        let i = self.idx(x, y);
        self.data[i] = v;
    }

    #[inline]
    pub fn add(&mut self, x: usize, y: usize, v: f64) {
        let i = self.idx(x, y);
        self.data[i] += v;
    }

    /// Value at the cell containing a continuous position, clamped to bounds.
    pub fn at_pos(&self, pos: Vec2) -> f64 {
        let (x, y) = self.cell_of(pos);
        self.get(x, y)
    }

    /// Cell indices containing a continuous position, clamped to bounds.
    pub fn cell_of(&self, pos: Vec2) -> (usize, usize) {
        let x = (pos.x.floor().max(0.0) as usize).min(self.width - 1);
        let y = (pos.y.floor().max(0.0) as usize).min(self.height - 1);
        (x, y)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn fill(&mut self, value: f64) {
        self.data.fill(value);
    }

    /// Scale entries so they sum to one. Returns false when the sum is not
    /// strictly positive (caller decides how to recover).
    pub fn normalize(&mut self) -> bool {
        let s = self.sum();
        if s > 0.0 && s.is_finite() {
            let inv = 1.0 / s;
            for v in &mut self.data {
                *v *= inv;
            }
            true
        } else {
            false
        }
    }

    /// Iterate `(x, y, value)` in row-major order.
    pub fn iter_cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let w = self.width;
        self.data.iter().enumerate().map(move |(i, &v)| (i % w, i / w, v))
    }
}
