//! Sharp constants and the Hausdorff-Young and Young functionals.

mod checks;

pub use checks::{cooperation_check, noslacking_check};

use crate::error::{Error, Result};
use crate::grids::{convolve, fourier_transform, lp_norm, SampledFunction};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// An exponent p ∈ (1, 2] with its conjugate q = p/(p−1) computed once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub p: f64,
    pub q: f64,
}

impl ExponentPair {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 1.0 && p <= 2.0) {
            return Err(Error::InvalidExponent(format!("p = {p} outside (1, 2]")));
        }
        Ok(Self { p, q: p / (p - 1.0) })
    }
}

/// Exponents p₁, p₂, p₃ ∈ (1, 2] with Σ 1/p_j = 2, in dimension d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YoungTriple {
    pub p: [f64; 3],
    pub d: usize,
}

impl YoungTriple {
    pub fn new(p: [f64; 3], d: usize) -> Result<Self> {
        if p.iter().any(|&pj| !(pj > 1.0 && pj <= 2.0)) {
            return Err(Error::InvalidExponent(format!("{p:?} not all in (1, 2]")));
        }
        let s: f64 = p.iter().map(|pj| 1.0 / pj).sum();
        if (s - 2.0).abs() > 1e-12 {
            return Err(Error::InvalidExponent(format!("Σ 1/p_j = {s}, expected 2")));
        }
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(Self { p, d })
    }

    /// The Gaussian triple G^{p_j'} attaining equality in Young's inequality.
    pub fn extremal_exponents(&self) -> [f64; 3] {
        self.p.map(|pj| pj / (pj - 1.0))
    }
}

/// A_p = p^{1/2p} q^{−1/2q}.
pub fn babenko(p: f64) -> Result<f64> {
    let e = ExponentPair::new(p)?;
    Ok((e.p.ln() / (2.0 * e.p) - e.q.ln() / (2.0 * e.q)).exp())
}

/// B_{p,d} = ½(p−1)(2−p)A_p^d; zero at the degenerate endpoint p = 2.
pub fn b_constant(p: f64, d: usize) -> Result<f64> {
    let a = babenko(p)?;
    Ok(0.5 * (p - 1.0) * (2.0 - p) * a.powi(d as i32))
}

/// (∏ A_{p_j})^d.
pub fn young_constant(t: &YoungTriple) -> Result<f64> {
    let mut c = 1.0;
    for pj in t.p {
        c *= babenko(pj)?;
    }
    Ok(c.powi(t.d as i32))
}

/// ‖f̂‖_q / ‖f‖_p.
pub fn hy_ratio(f: &SampledFunction, p: f64) -> Result<f64> {
    let e = ExponentPair::new(p)?;
    let np = lp_norm(f, e.p)?;
    if np == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(lp_norm(&fourier_transform(f)?, e.q)? / np)
}

/// ⟨f₁*f₂, f₃⟩ = ∫ (f₁*f₂) f̄₃.
pub fn young_trilinear(f1: &SampledFunction, f2: &SampledFunction, f3: &SampledFunction, t: &YoungTriple) -> Result<Complex64> {
    if f1.grid().dim() != t.d {
        return Err(Error::InvalidParameter("triple dimension differs from grid".into()));
    }
    f1.same_grid(f3)?;
    convolve(f1, f2)?.inner(f3)
}

/// |⟨f₁*f₂, f₃⟩| / (C ∏‖f_j‖_{p_j}).
pub fn young_ratio(f1: &SampledFunction, f2: &SampledFunction, f3: &SampledFunction, t: &YoungTriple) -> Result<f64> {
    let v = young_trilinear(f1, f2, f3, t)?.norm();
    let norms = lp_norm(f1, t.p[0])? * lp_norm(f2, t.p[1])? * lp_norm(f3, t.p[2])?;
    if norms == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(v / (young_constant(t)? * norms))
}
