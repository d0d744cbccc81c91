//! Numerical toolkit around the sharp Hausdorff-Young inequality: sharp
//! constants, the Gaussian extremizer manifold, the second variation and its
//! Hermite spectrum, additive-combinatorial structure, and Fourier analysis on
//! hybrid groups.

pub mod additive;
pub mod constants;
pub mod error;
pub mod extraction;
pub mod gaussian;
pub mod grids;
pub mod hybrid;
pub mod report;
pub mod second_variation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use report::VerificationReport;
