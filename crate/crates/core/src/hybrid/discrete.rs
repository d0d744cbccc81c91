use crate::constants::ExponentPair;
use crate::error::{Error, Result};
use crate::grids::{discrete_fourier, torus_lq_norm, DiscreteFunction};
use serde::Serialize;

/// Concentration diagnostics of a function on ℤ^d.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteConcentration {
    /// Location of the largest |f|.
    pub z_star: Vec<i64>,
    /// ‖f‖_{ℓ^p(ℤ∖{z*})}/‖f‖_p.
    pub off_mass: f64,
    /// ‖𝔉f‖_{L^q(𝕋)}/‖f‖_p.
    pub ratio: f64,
    /// ‖f‖_∞/‖f‖_p.
    pub sup_ratio: f64,
}

pub fn discrete_concentration(f: &DiscreteFunction, p: f64, m_theta: usize) -> Result<DiscreteConcentration> {
    let e = ExponentPair::new(p)?;
    let norm = f.lp_norm(p)?;
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let (i_star, sup) = f
        .values()
        .iter()
        .map(|z| z.norm())
        .enumerate()
        .fold((0, -1.0), |best, (i, a)| if a > best.1 { (i, a) } else { best });
    let off: f64 = f.values().iter().enumerate().filter(|&(i, _)| i != i_star).map(|(_, z)| z.norm().powf(p)).sum();
    let ratio = torus_lq_norm(&discrete_fourier(f, m_theta)?, e.q)? / norm;
    Ok(DiscreteConcentration {
        z_star: f.support()[i_star].clone(),
        off_mass: off.powf(1.0 / p) / norm,
        ratio,
        sup_ratio: sup / norm,
    })
}
