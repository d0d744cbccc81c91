use crate::error::{Error, Result};
use crate::grids::{convolve, Grid, SampledFunction};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest Nyström matrix dimension accepted by the dense eigensolver.
pub const MAX_MATRIX_DIM: usize = 4096;

fn check_exponent(p: f64) -> Result<()> {
    if p > 1.0 && p < 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(format!("p = {p} outside (1, 2)")))
    }
}

/// (σ, t) = ((p−1)/(2−p), (2−p)/2).
pub fn operator_exponents(p: f64) -> (f64, f64) {
    ((p - 1.0) / (2.0 - p), (2.0 - p) / 2.0)
}

fn gauss_pow(x: [f64; 2], s: f64) -> f64 {
    (-PI * s * (x[0] * x[0] + x[1] * x[1])).exp()
}

/// 𝒯φ = G^t·(G^σ ∗ (G^t φ)).
pub fn operator_apply(phi: &SampledFunction, p: f64) -> Result<SampledFunction> {
    check_exponent(p)?;
    let (sigma, t) = operator_exponents(p);
    let grid = *phi.grid();
    let weighted = phi.map_with_point(|x, z| z * gauss_pow(x, t));
    let kernel = SampledFunction::from_real_fn(grid, |x| gauss_pow(x, sigma));
    let conv = convolve(&kernel, &weighted)?;
    Ok(conv.map_with_point(|x, z| z * gauss_pow(x, t)))
}

/// Nyström discretisation of 𝒯 on a grid.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub grid: Grid,
    pub p: f64,
    pub entries: DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn new(grid: Grid, p: f64) -> Result<Self> {
        check_exponent(p)?;
        let n = grid.len();
        if n > MAX_MATRIX_DIM {
            return Err(Error::TooLarge(format!("operator matrix of dimension {n} exceeds {MAX_MATRIX_DIM}")));
        }
        let (sigma, t) = operator_exponents(p);
        let pts: Vec<[f64; 2]> = (0..n).map(|i| grid.point(i)).collect();
        let outer: Vec<f64> = pts.iter().map(|&x| gauss_pow(x, t)).collect();
        let vol = grid.cell_volume();
        let mut entries = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let diff = [pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]];
                let v = outer[i] * gauss_pow(diff, sigma) * outer[j] * vol;
                entries[(i, j)] = v;
                entries[(j, i)] = v;
            }
        }
        Ok(Self { grid, p, entries })
    }

    /// All eigenvalues in decreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.entries.clone());
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// Top k eigenpairs, eigenvectors sampled on the grid and L²-normalised.
    pub fn eigenpairs(&self, k: usize) -> Vec<(f64, SampledFunction)> {
        let eig = SymmetricEigen::new(self.entries.clone());
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let scale = 1.0 / self.grid.cell_volume().sqrt();
        idx.into_iter()
            .take(k)
            .map(|i| {
                let col = eig.eigenvectors.column(i);
                let values = col.iter().map(|&v| Complex64::new(v * scale, 0.0)).collect();
                (eig.eigenvalues[i], SampledFunction::new(self.grid, values).expect("length matches grid"))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub warning: Option<String>,
}

/// Top k_max eigenvalues of the Nyström matrix in decreasing order.
pub fn operator_spectrum(p: f64, k_max: usize, grid: &Grid) -> Result<Spectrum> {
    if k_max > 12 {
        return Err(Error::InvalidParameter(format!("k_max = {k_max} exceeds 12")));
    }
    let m = OperatorMatrix::new(*grid, p)?;
    let mut eigenvalues = m.eigenvalues();
    eigenvalues.truncate(k_max);
    let warning = (grid.dim() == 1 && grid.points_per_axis() < 256)
        .then(|| format!("grid with N = {} is coarse; eigenvalues may be inaccurate", grid.points_per_axis()));
    Ok(Spectrum { eigenvalues, warning })
}

/// Predicted eigenvalues (p−1)^{|α|}(2−p)^{d/2} listed with multiplicity
/// (|α|+1 in two dimensions), truncated to k_max.
pub fn predicted_spectrum(p: f64, d: usize, k_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max);
    let mut order = 0;
    while out.len() < k_max {
        let mult = if d == 2 { order + 1 } else { 1 };
        let lam = (p - 1.0).powi(order as i32) * (2.0 - p).powf(d as f64 / 2.0);
        out.extend(std::iter::repeat(lam).take(mult.min(k_max - out.len())));
        order += 1;
    }
    out
}
