use crate::error::{Error, Result};
use crate::grids::{lp_norm_pow, Grid, SampledFunction};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// Function on ℤ×ℝ truncated to n ∈ [−M, M], one sampled slice per n on a
/// shared x-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridFunction {
    m: usize,
    grid: Grid,
    slices: Vec<SampledFunction>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    kappa: usize,
    d: usize,
    #[serde(rename = "M")]
    m: usize,
    grid: Grid,
}

impl HybridFunction {
    pub fn new(m: usize, grid: Grid, slices: Vec<SampledFunction>) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(Error::InvalidGrid("hybrid slices are one-dimensional".into()));
        }
        if slices.len() != 2 * m + 1 {
            return Err(Error::InvalidParameter(format!("expected {} slices, got {}", 2 * m + 1, slices.len())));
        }
        for s in &slices {
            if *s.grid() != grid {
                return Err(Error::GridMismatch);
            }
            s.validate()?;
        }
        Ok(Self { m, grid, slices })
    }

    pub fn zeros(m: usize, grid: Grid) -> Result<Self> {
        Self::new(m, grid, vec![SampledFunction::zeros(grid); 2 * m + 1])
    }

    pub fn from_fn(m: usize, grid: Grid, f: impl Fn(i64, f64) -> Complex64) -> Result<Self> {
        let slices = (0..=2 * m).map(|k| SampledFunction::from_fn(grid, |x| f(k as i64 - m as i64, x[0]))).collect();
        Self::new(m, grid, slices)
    }

    /// δ_{n,n₀} ⊗ slice.
    pub fn single(m: usize, n0: i64, slice: SampledFunction) -> Result<Self> {
        let grid = *slice.grid();
        let mut out = Self::zeros(m, grid)?;
        *out.slice_mut(n0)? = slice;
        Ok(out)
    }

    pub fn half_range(&self) -> usize {
        self.m
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub(crate) fn slices_mut(&mut self) -> &mut [SampledFunction] {
        &mut self.slices
    }

    pub fn slices(&self) -> &[SampledFunction] {
        &self.slices
    }

    /// Integer labels −M..=M in slice order.
    pub fn labels(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.slices.len()).map(|k| k as i64 - self.m as i64)
    }

    fn index(&self, n: i64) -> Result<usize> {
        let k = n + self.m as i64;
        if k < 0 || k as usize >= self.slices.len() {
            return Err(Error::InvalidParameter(format!("n = {n} outside [−{0}, {0}]", self.m)));
        }
        Ok(k as usize)
    }

    pub fn slice(&self, n: i64) -> Result<&SampledFunction> {
        Ok(&self.slices[self.index(n)?])
    }

    pub fn slice_mut(&mut self, n: i64) -> Result<&mut SampledFunction> {
        let k = self.index(n)?;
        Ok(&mut self.slices[k])
    }

    pub fn is_zero(&self) -> bool {
        self.slices.iter().all(|s| s.is_zero())
    }

    /// Σ_n ∫|F(n,x)|^p dx.
    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        self.slices.iter().map(|s| lp_norm_pow(s, p)).sum()
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidExponent(format!("p = {p}")));
        }
        Ok(self.lp_norm_pow(p).powf(1.0 / p))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.m != other.m || self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let slices = self.slices.iter().zip(&other.slices).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>>>()?;
        Self::new(self.m, self.grid, slices)
    }

    /// One JSON header line followed by the slices n = −M..M as little-endian
    /// re/im `f64` pairs.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let header = Header { kappa: 1, d: 1, m: self.m, grid: self.grid };
        let line = serde_json::to_string(&header).map_err(|e| Error::Format(e.to_string()))?;
        writeln!(w, "{line}")?;
        for s in &self.slices {
            for z in s.values() {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read<R: BufRead>(mut r: R) -> Result<Self> {
        let mut line = String::new();
        r.read_line(&mut line)?;
        let h: Header = serde_json::from_str(line.trim_end()).map_err(|e| Error::Format(e.to_string()))?;
        if h.kappa != 1 || h.d != 1 {
            return Err(Error::Format("only κ = d = 1 is supported".into()));
        }
        let grid = Grid::new(h.grid.dim(), h.grid.half_width(), h.grid.points_per_axis())?;
        let mut slices = Vec::with_capacity(2 * h.m + 1);
        let mut buf = [0u8; 16];
        for _ in 0..=2 * h.m {
            let mut values = Vec::with_capacity(grid.len());
            for _ in 0..grid.len() {
                r.read_exact(&mut buf)?;
                let re = f64::from_le_bytes(buf[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(buf[8..].try_into().expect("8 bytes"));
                values.push(Complex64::new(re, im));
            }
            slices.push(SampledFunction::new(grid, values)?);
        }
        Self::new(h.m, grid, slices)
    }
}
