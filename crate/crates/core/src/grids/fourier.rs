//! Continuum Fourier transform f̂(ξ) = ∫ e^{−2πi x·ξ} f(x) dx on grids.
//!
//! With x_j = −L + jΔx and ξ_k = (k − N/2)/(2L) the Riemann sum factors as
//!
//!   f̂_k = Δx · (−1)^{k+N/2} · DFT[(−1)^j f_j]_k,
//!
//! and the inverse as
//!
//!   f_j = Δξ · (−1)^j · Σ_k e^{2πijk/N} (−1)^{k+N/2} f̂_k.
//!
//! Since Δx·Δξ·N = 1 the pair inverts exactly. Two-dimensional transforms
//! apply the same formula along each axis.

use super::grid::Grid;
use super::sampled::SampledFunction;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

fn alternating(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Runs the signed DFT along every axis; `pre(j)` multiplies input index j
/// and `post(k)` output index k on each axis.
fn separable(values: &mut [Complex64], grid: &Grid, fft: &Arc<dyn Fft<f64>>, pre: &[f64], post: &[f64]) {
    let n = grid.points_per_axis();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut run = |line: &mut [Complex64]| {
        for (z, s) in line.iter_mut().zip(pre) {
            *z *= s;
        }
        fft.process_with_scratch(line, &mut scratch);
        for (z, s) in line.iter_mut().zip(post) {
            *z *= s;
        }
    };
    match grid.dim() {
        1 => run(values),
        _ => {
            for row in values.chunks_mut(n) {
                run(row);
            }
            for c in 0..n {
                for (r, z) in line.iter_mut().enumerate() {
                    *z = values[r * n + c];
                }
                run(&mut line);
                for (r, z) in line.iter().enumerate() {
                    values[r * n + c] = *z;
                }
            }
        }
    }
}

fn transform(f: &SampledFunction, out_grid: Grid, direction: FftDirection, scale: f64) -> Result<SampledFunction> {
    f.validate()?;
    let grid = *f.grid();
    let n = grid.points_per_axis();
    let fft = FftPlanner::new().plan_fft(n, direction);
    let half = n / 2;
    let (pre, post): (Vec<f64>, Vec<f64>) = match direction {
        FftDirection::Forward => (
            (0..n).map(alternating).collect(),
            (0..n).map(|k| alternating(k + half) * scale).collect(),
        ),
        FftDirection::Inverse => (
            (0..n).map(|k| alternating(k + half)).collect(),
            (0..n).map(|j| alternating(j) * scale).collect(),
        ),
    };
    let mut values = f.values().to_vec();
    separable(&mut values, &grid, &fft, &pre, &post);
    SampledFunction::new(out_grid, values)
}

/// Riemann-sum Fourier transform onto the dual grid.
pub fn fourier_transform(f: &SampledFunction) -> Result<SampledFunction> {
    let g = f.grid();
    transform(f, g.dual(), FftDirection::Forward, g.spacing())
}

/// Inverse of [`fourier_transform`]; the input lives on a frequency grid and
/// the output on the spatial grid whose dual it is.
pub fn inverse_fourier_transform(fhat: &SampledFunction) -> Result<SampledFunction> {
    let g = fhat.grid();
    transform(fhat, g.dual(), FftDirection::Inverse, g.spacing())
}

/// Inverse transform that checks the result lands on `target`.
pub fn inverse_fourier_transform_onto(fhat: &SampledFunction, target: &Grid) -> Result<SampledFunction> {
    if fhat.grid().dual() != *target {
        return Err(Error::GridMismatch);
    }
    inverse_fourier_transform(fhat)
}

/// (f*g)(x_j) = Σ_m f(x_j − x_m) g(x_m) Δx^d with periodic wrap of the box.
pub fn convolve(f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    f.same_grid(g)?;
    let prod = fourier_transform(f)?.mul(&fourier_transform(g)?)?;
    inverse_fourier_transform(&prod)
}

/// Direct O(N²) evaluation of f̂ at arbitrary frequencies (d = 1).
pub fn fourier_at(f: &SampledFunction, xi: &[f64]) -> Result<Vec<Complex64>> {
    if f.grid().dim() != 1 {
        return Err(Error::InvalidGrid("pointwise transform is one-dimensional".into()));
    }
    let g = f.grid();
    let dx = g.spacing();
    Ok(xi
        .iter()
        .map(|&w| {
            f.values()
                .iter()
                .enumerate()
                .map(|(j, &v)| v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * g.coord(j) * w))
                .sum::<Complex64>()
                * dx
        })
        .collect())
}
