use crate::error::{Error, Result};
use crate::grids::SampledFunction;
use num_complex::Complex64;

/// f = sharp + flat with sharp = f where |f| < η|F| and flat elsewhere.
#[derive(Debug, Clone)]
pub struct SharpFlatSplit {
    pub sharp: SampledFunction,
    pub flat: SampledFunction,
    pub eta: f64,
}

pub fn split_sharp_flat(f: &SampledFunction, big_f: &SampledFunction, eta: f64) -> Result<SharpFlatSplit> {
    if !(eta > 0.0 && eta <= 0.5) {
        return Err(Error::InvalidParameter(format!("η = {eta} outside (0, 1/2]")));
    }
    f.same_grid(big_f)?;
    if big_f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let zero = Complex64::new(0.0, 0.0);
    let sharp = f.zip_with(big_f, |a, b| if a.norm() < eta * b.norm() { a } else { zero })?;
    let flat = f.zip_with(big_f, |a, b| if a.norm() < eta * b.norm() { zero } else { a })?;
    Ok(SharpFlatSplit { sharp, flat, eta })
}
