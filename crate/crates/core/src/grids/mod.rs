//! Sampled functions on ℝ^d, ℤ^d and 𝕋^d with their norms and transforms.

mod discrete;
mod fourier;
mod grid;
pub mod io;
mod sampled;

pub use discrete::{discrete_fourier, torus_lq_norm, DiscreteFunction, TorusFunction};
pub use fourier::{convolve, fourier_at, fourier_transform, inverse_fourier_transform, inverse_fourier_transform_onto};
pub use grid::Grid;
pub use sampled::{lp_norm, lp_norm_pow, SampledFunction};
