use crate::error::{Error, Result};
use crate::grids::{convolve, lp_norm, Grid, SampledFunction};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLift {
    pub g: SampledFunction,
    /// Young exponent t with 1/t = 2/r − 1.
    pub t: f64,
    /// ‖g * g‖_t / ‖g‖_r².
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLiftSummary {
    pub r: f64,
    pub t: f64,
    pub ratio: f64,
}

/// Copies f into the middle of a grid twice as wide so that the circular
/// convolution on it is the linear one.
fn zero_pad(f: &SampledFunction) -> Result<SampledFunction> {
    let grid = f.grid();
    let n = grid.len();
    let wide = Grid::new(1, 2.0 * grid.half_width(), 2 * n)?;
    let mut values = vec![Complex64::new(0.0, 0.0); 2 * n];
    values[n / 2..n / 2 + n].copy_from_slice(f.values());
    SampledFunction::new(wide, values)
}

/// g = |f|^{p/r}, so that ‖g‖_r^r = ‖f‖_p^p, with its Young self-convolution ratio.
pub fn power_lift(f: &SampledFunction, p: f64, r: f64) -> Result<PowerLift> {
    if f.grid().dim() != 1 {
        return Err(Error::InvalidGrid("power lift is one-dimensional".into()));
    }
    if !(r > 1.0 && r < p) {
        return Err(Error::InvalidExponent(format!("r = {r} outside (1, {p})")));
    }
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let g = f.map(|z| Complex64::new(z.norm().powf(p / r), 0.0));
    let t = 1.0 / (2.0 / r - 1.0);
    let padded = zero_pad(&g)?;
    let gg = convolve(&padded, &padded)?;
    let ratio = lp_norm(&gg, t)? / lp_norm(&g, r)?.powi(2);
    Ok(PowerLift { g, t, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::lp_norm_pow;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_lift() {
        let grid = Grid::new(1, 8.0, 1024).unwrap();
        let f = SampledFunction::gaussian(grid);
        let lift = power_lift(&f, 1.5, 1.25).unwrap();
        let expected = SampledFunction::from_real_fn(grid, |x| (-1.2 * PI * x[0] * x[0]).exp());
        assert!(lift.g.sub(&expected).unwrap().sup_norm() < 1e-14);
        assert!((lift.t - 5.0 / 3.0).abs() < 1e-14);
        assert!(lift.ratio > 0.0 && lift.ratio <= 1.0);
        assert!((lp_norm_pow(&lift.g, 1.25) - lp_norm_pow(&f, 1.5)).abs() < 1e-14);
    }

    #[test]
    fn gaussian_ratio_matches_closed_form() {
        // G_a = e^{−πax²}: G_a * G_a = (2a)^{−1/2} G_{a/2}, ‖G_a‖_s = (as)^{−1/2s}
        let grid = Grid::new(1, 8.0, 1024).unwrap();
        let (p, r) = (1.5, 1.25);
        let lift = power_lift(&SampledFunction::gaussian(grid), p, r).unwrap();
        let a = p / r;
        let t = lift.t;
        let expected = (2.0 * a).powf(-0.5) * (a / 2.0 * t).powf(-0.5 / t) / (a * r).powf(-1.0 / r);
        assert!((lift.ratio - expected).abs() < 1e-10);
    }

    #[test]
    fn errors() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        assert!(matches!(power_lift(&SampledFunction::zeros(grid), 1.5, 1.25), Err(Error::ZeroFunction)));
        assert!(power_lift(&SampledFunction::gaussian(grid), 1.5, 1.6).is_err());
        assert!(power_lift(&SampledFunction::gaussian(grid), 1.5, 1.0).is_err());
    }

    #[test]
    fn mass_identity_on_rough_input() {
        let grid = Grid::new(1, 4.0, 256).unwrap();
        let f = SampledFunction::from_fn(grid, |x| Complex64::new((3.0 * x[0]).sin(), x[0].cos() * 0.3) * (-x[0] * x[0]).exp());
        let lift = power_lift(&f, 1.8, 1.3).unwrap();
        let (a, b) = (lp_norm_pow(&lift.g, 1.3), lp_norm_pow(&f, 1.8));
        assert!((a - b).abs() < 1e-12 * b);
    }
}
