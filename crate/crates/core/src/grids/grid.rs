use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform tensor grid on the box [−L, L)^d with N points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    d: usize,
    l: f64,
    n: usize,
}

impl Grid {
    pub fn new(d: usize, l: f64, n: usize) -> Result<Self> {
        if d != 1 && d != 2 {
            return Err(Error::InvalidGrid(format!("dimension {d} not in {{1,2}}")));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidGrid(format!("half-width {l} must be positive")));
        }
        if n < 8 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("N = {n} must be even and at least 8")));
        }
        Ok(Self { d, l, n })
    }

    /// L=8, N=1024 in one dimension; L=6, N=256 per axis in two.
    pub fn default_for(d: usize) -> Self {
        match d {
            2 => Self { d: 2, l: 6.0, n: 256 },
            _ => Self { d: 1, l: 8.0, n: 1024 },
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn half_width(&self) -> f64 {
        self.l
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    /// Volume element Δx^d.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.d as i32)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of the j-th sample along one axis.
    pub fn coord(&self, j: usize) -> f64 {
        -self.l + j as f64 * self.spacing()
    }

    pub fn axis(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.coord(j)).collect()
    }

    /// Multi-index of a flat row-major index.
    pub fn unflatten(&self, idx: usize) -> [usize; 2] {
        match self.d {
            1 => [idx, 0],
            _ => [idx / self.n, idx % self.n],
        }
    }

    /// Sample point of a flat index; unused trailing coordinates are zero.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let [a, b] = self.unflatten(idx);
        match self.d {
            1 => [self.coord(a), 0.0],
            _ => [self.coord(a), self.coord(b)],
        }
    }

    /// The frequency grid: spacing 1/(2L), half-width N/(4L).
    pub fn dual(&self) -> Self {
        Self { d: self.d, l: self.n as f64 / (4.0 * self.l), n: self.n }
    }

    /// Whether a flat index touches the outer layer of the box.
    pub fn on_boundary(&self, idx: usize) -> bool {
        let [a, b] = self.unflatten(idx);
        let edge = |j: usize| j == 0 || j == self.n - 1;
        edge(a) || (self.d == 2 && edge(b))
    }
}
