use super::grid::Grid;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// A complex function sampled on every point of a [`Grid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidFunction(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// Samples `f` at every grid point. In one dimension the second
    /// coordinate passed to `f` is zero.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    /// The standard Gaussian e^{−π|x|²}.
    pub fn gaussian(grid: Grid) -> Self {
        Self::from_real_fn(grid, |x| (-std::f64::consts::PI * (x[0] * x[0] + x[1] * x[1])).exp())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn validate(&self) -> Result<()> {
        match self.values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            Some(i) => Err(Error::InvalidFunction(format!("non-finite value at index {i}"))),
            None => Ok(()),
        }
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&z| f(z)).collect() }
    }

    /// Pointwise map that also sees the sample point.
    pub fn map_with_point(&self, f: impl Fn([f64; 2], Complex64) -> Complex64) -> Self {
        let values = self.values.iter().enumerate().map(|(i, &z)| f(self.grid.point(i), z)).collect();
        Self { grid: self.grid, values }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    /// a·self + b·other.
    pub fn axpby(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.zip_with(other, |x, y| a * x + b * y)
    }

    /// Riemann sum Σ f(x_j)Δx^d.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.cell_volume()
    }

    /// ⟨f, g⟩ = ∫ f ḡ.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_grid(other)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.cell_volume())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// True when some boundary sample exceeds 1e−6 of the peak modulus,
    /// meaning the box may be truncating the function.
    pub fn boundary_warning(&self) -> bool {
        let peak = self.sup_norm();
        if peak == 0.0 {
            return false;
        }
        (0..self.grid.len()).any(|i| self.grid.on_boundary(i) && self.values[i].norm() > 1e-6 * peak)
    }
}

/// (Σ_j |f(x_j)|^p Δx^d)^{1/p}.
pub fn lp_norm(f: &SampledFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(format!("p = {p} must lie in [1, ∞)")));
    }
    f.validate()?;
    Ok(lp_norm_pow(f, p).powf(1.0 / p))
}

/// Σ_j |f(x_j)|^p Δx^d without the final root; no validation.
pub fn lp_norm_pow(f: &SampledFunction, p: f64) -> f64 {
    let s: f64 = if p == 2.0 {
        f.values().iter().map(|z| z.norm_sqr()).sum()
    } else {
        f.values().iter().map(|z| z.norm().powf(p)).sum()
    };
    s * f.grid().cell_volume()
}
