use super::{gaussian_weighted_norm_sq, hermite_norm_sq, hermite_polynomials};
use crate::constants::{babenko, hy_ratio};
use crate::error::{Error, Result};
use crate::grids::{lp_norm_pow, Grid, SampledFunction};
use std::f64::consts::PI;

/// Even smooth cutoff: 1 on |u| ≤ ½, 0 on |u| ≥ 1, a C^∞ step in between.
pub fn cutoff(u: f64) -> f64 {
    let v = 2.0 * (1.0 - u.abs());
    if v >= 1.0 {
        return 1.0;
    }
    if v <= 0.0 {
        return 0.0;
    }
    let a = (-1.0 / v).exp();
    let b = (-1.0 / (1.0 - v)).exp();
    a / (a + b)
}

#[derive(Debug, Clone)]
pub struct SharpnessMember {
    pub f: SampledFunction,
    pub c_eps: f64,
    /// Cutoff radius ρ√ln(1/ε).
    pub radius: f64,
    /// ∫ f x^k G^{p−1} for k = 0, 1, 2.
    pub moments: [f64; 3],
}

/// f_ε = cutoff(x/(ρ√ln(1/ε)))·(εH₃ + c_εH₁)·G on a one-dimensional grid, with
/// H_k = Q_k/‖Q_kG^{p/2}‖₂ and c_ε chosen so that ∫f x G^{p−1} = 0.
pub fn sharpness_family(eps: f64, rho: f64, p: f64, grid: &Grid) -> Result<SharpnessMember> {
    if grid.dim() != 1 {
        return Err(Error::InvalidGrid("the sharpness family is one-dimensional".into()));
    }
    if !(rho > 0.0 && PI * rho * rho < 1.0) {
        return Err(Error::InvalidParameter(format!("ρ = {rho} must satisfy 0 < πρ² < 1")));
    }
    if !(eps > 0.0 && eps <= 0.2) {
        return Err(Error::InvalidParameter(format!("ε = {eps} outside (0, 0.2]")));
    }
    let radius = rho * (1.0 / eps).ln().sqrt();
    if radius < 16.0 * grid.spacing() {
        return Err(Error::InvalidParameter(format!("ε = {eps} too large for the cutoff scale: radius {radius} is under 16 grid cells")));
    }
    if radius >= grid.half_width() {
        return Err(Error::InvalidParameter(format!("cutoff radius {radius} exceeds the grid")));
    }
    let polys = hermite_polynomials(3, p)?;
    let h1 = |x: f64| polys[1].eval(x) / hermite_norm_sq(1, p).sqrt();
    let h3 = |x: f64| polys[3].eval(x) / hermite_norm_sq(3, p).sqrt();
    let xs = grid.axis();
    let weight = |x: f64| cutoff(x / radius) * x * (-PI * p * x * x).exp();
    let a3: f64 = xs.iter().map(|&x| weight(x) * h3(x)).sum();
    let a1: f64 = xs.iter().map(|&x| weight(x) * h1(x)).sum();
    if a1.abs() < 1e-300 {
        return Err(Error::InvalidParameter("degenerate first-moment equation".into()));
    }
    let c_eps = -eps * a3 / a1;
    let f = SampledFunction::from_real_fn(*grid, |x| {
        let x = x[0];
        cutoff(x / radius) * (eps * h3(x) + c_eps * h1(x)) * (-PI * x * x).exp()
    });
    let mut moments = [0.0; 3];
    for (k, m) in moments.iter_mut().enumerate() {
        *m = f
            .values()
            .iter()
            .zip(&xs)
            .map(|(z, &x)| z.re * x.powi(k as i32) * (-PI * (p - 1.0) * x * x).exp())
            .sum::<f64>()
            * grid.spacing();
    }
    Ok(SharpnessMember { f, c_eps, radius, moments })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeficitRatio {
    /// A_p − ‖(G+f)^‖_q/‖G+f‖_p.
    pub deficit: f64,
    /// deficit / (‖G+f‖_p^{−p}∫|f|²G^{p−2}).
    pub normalized: f64,
    /// deficit / ∫|f|²G^{p−2}.
    pub unnormalized: f64,
}

pub fn deficit_ratio_on(eps: f64, rho: f64, p: f64, grid: &Grid) -> Result<DeficitRatio> {
    let member = sharpness_family(eps, rho, p, grid)?;
    let sum = member.f.add(&SampledFunction::gaussian(*grid))?;
    let deficit = babenko(p)? - hy_ratio(&sum, p)?;
    let weighted = gaussian_weighted_norm_sq(&member.f, p);
    let norm_pow = lp_norm_pow(&sum, p);
    Ok(DeficitRatio { deficit, normalized: deficit * norm_pow / weighted, unnormalized: deficit / weighted })
}

/// Deficit ratio on the default one-dimensional grid.
pub fn deficit_ratio(eps: f64, rho: f64, p: f64) -> Result<DeficitRatio> {
    deficit_ratio_on(eps, rho, p, &Grid::default_for(1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RichardsonFit {
    pub limit: f64,
    /// Fitted exponent s in r(ε) ≈ r∞ + Kε^s.
    pub order: f64,
    /// False when the differences do not shrink geometrically; the limit is
    /// then the last value.
    pub converged: bool,
}

/// Three-point extrapolation for values at ε, ε/2, ε/4.
pub fn richardson(values: [f64; 3]) -> RichardsonFit {
    let d1 = values[0] - values[1];
    let d2 = values[1] - values[2];
    let ratio = d1 / d2;
    if !(ratio.is_finite() && ratio > 1.0) {
        return RichardsonFit { limit: values[2], order: f64::NAN, converged: false };
    }
    let order = ratio.log2();
    RichardsonFit { limit: values[2] - d2 / (ratio - 1.0), order, converged: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_shape() {
        assert_eq!(cutoff(0.0), 1.0);
        assert_eq!(cutoff(0.5), 1.0);
        assert_eq!(cutoff(-1.0), 0.0);
        assert_eq!(cutoff(1.5), 0.0);
        assert!((cutoff(0.75) - 0.5).abs() < 1e-15);
        for k in 0..100 {
            let u = k as f64 / 100.0;
            assert_eq!(cutoff(u), cutoff(-u));
            assert!(cutoff(u + 0.01) <= cutoff(u));
        }
    }

    #[test]
    fn moments_vanish_and_odd() {
        let grid = Grid::default_for(1);
        for eps in [0.1, 0.05, 0.025] {
            let m = sharpness_family(eps, 0.4, 1.5, &grid).unwrap();
            for k in 0..3 {
                assert!(m.moments[k].abs() < 1e-10, "ε={eps} k={k}: {}", m.moments[k]);
            }
            let n = grid.points_per_axis();
            for j in 1..n {
                assert_eq!(m.f.values()[j], -m.f.values()[n - j]);
            }
        }
    }

    #[test]
    fn coefficient_ratio_decreases() {
        let grid = Grid::default_for(1);
        let r: Vec<f64> = [0.1, 0.05, 0.025, 0.0125]
            .iter()
            .map(|&e| (sharpness_family(e, 0.4, 1.5, &grid).unwrap().c_eps / e).abs())
            .collect();
        for w in r.windows(2) {
            assert!(w[1] < w[0], "{r:?}");
        }
    }

    #[test]
    fn preconditions() {
        let grid = Grid::default_for(1);
        assert!(sharpness_family(0.3, 0.4, 1.5, &grid).is_err());
        assert!(sharpness_family(0.1, 0.6, 1.5, &grid).is_err());
        assert!(sharpness_family(0.1, 0.005, 1.5, &grid).is_err());
        assert!(sharpness_family(0.1, 0.4, 1.5, &Grid::default_for(2)).is_err());
    }

    #[test]
    fn deficit_positive_and_grid_stable() {
        let coarse = Grid::new(1, 8.0, 1024).unwrap();
        let fine = Grid::new(1, 8.0, 2048).unwrap();
        for eps in [0.1, 0.05, 0.025] {
            let a = deficit_ratio_on(eps, 0.4, 1.5, &coarse).unwrap();
            let b = deficit_ratio_on(eps, 0.4, 1.5, &fine).unwrap();
            assert!(a.deficit > 0.0);
            assert!((a.normalized - b.normalized).abs() < 1e-4);
        }
    }

    #[test]
    fn richardson_on_model_sequence() {
        let model = |e: f64| 0.3 + 2.0 * e.powf(1.5);
        let fit = richardson([model(0.1), model(0.05), model(0.025)]);
        assert!(fit.converged);
        assert!((fit.limit - 0.3).abs() < 1e-12);
        assert!((fit.order - 1.5).abs() < 1e-10);
        assert!(!richardson([1.0, 2.0, 3.0]).converged);
    }
}
