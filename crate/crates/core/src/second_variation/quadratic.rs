use crate::error::{Error, Result};
use crate::grids::{fourier_transform, lp_norm_pow, SampledFunction};

const FLOOR: f64 = 1e-300;

/// Weighted integrals ((q−1)/2·Re² + ½·Im²)‖H‖_r^{−r}∫(h/H)²|H|^r with
/// exponent r and real-part coefficient (r−1)/2.
fn branch(h: &SampledFunction, big: &SampledFunction, r: f64) -> Result<f64> {
    let norm = lp_norm_pow(big, r);
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let mut re = 0.0;
    let mut im = 0.0;
    for (a, b) in h.values().iter().zip(big.values()) {
        let m = b.norm();
        if m < FLOOR {
            continue;
        }
        let ratio = a / b;
        let w = m.powf(r);
        re += ratio.re * ratio.re * w;
        im += ratio.im * ratio.im * w;
    }
    let vol = h.grid().cell_volume();
    let (re, im) = (re * vol, im * vol);
    if !(re.is_finite() && im.is_finite()) {
        return Err(Error::NotControlled("weighted integral diverges".into()));
    }
    Ok(((r - 1.0) / 2.0 * re + 0.5 * im) / norm)
}

/// 𝒬_F(h): the second variation of the Hausdorff–Young functional at F in the
/// direction h, with the transforms evaluated on the dual grid.
pub fn quadratic_form(big_f: &SampledFunction, h: &SampledFunction, p: f64) -> Result<f64> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidExponent(format!("p = {p} outside (1, 2)")));
    }
    big_f.same_grid(h)?;
    h.validate()?;
    big_f.validate()?;
    if weight_grows_at_boundary(big_f, h, p) {
        return Err(Error::NotControlled("weighted integrand does not decay at the grid boundary".into()));
    }
    let q = p / (p - 1.0);
    let tf = fourier_transform(big_f)?;
    let th = fourier_transform(h)?;
    Ok(branch(&th, &tf, q)? - branch(h, big_f, p)?)
}

/// Whether |h|²|F|^{p−2} is non-negligible on the grid boundary relative to
/// its peak, a sign that the weighted integral is not controlled.
pub fn weight_grows_at_boundary(big_f: &SampledFunction, h: &SampledFunction, p: f64) -> bool {
    let grid = big_f.grid();
    let w: Vec<f64> = h
        .values()
        .iter()
        .zip(big_f.values())
        .map(|(a, b)| if b.norm() < FLOOR { if a.norm() > 0.0 { f64::INFINITY } else { 0.0 } } else { a.norm_sqr() * b.norm().powf(p - 2.0) })
        .collect();
    let peak = w.iter().cloned().fold(0.0, f64::max);
    (0..w.len()).any(|i| grid.on_boundary(i) && w[i] > 1e-6 * peak)
}

/// ∫|h|²G^{p−2} against the standard Gaussian on h's grid.
pub fn gaussian_weighted_norm_sq(h: &SampledFunction, p: f64) -> f64 {
    let grid = h.grid();
    h.values()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let x = grid.point(i);
            z.norm_sqr() * (std::f64::consts::PI * (2.0 - p) * (x[0] * x[0] + x[1] * x[1])).exp()
        })
        .sum::<f64>()
        * grid.cell_volume()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::Grid;
    use num_complex::Complex64;

    #[test]
    fn trivial_direction() {
        let grid = Grid::default_for(1);
        let g = SampledFunction::gaussian(grid);
        assert_eq!(quadratic_form(&g, &SampledFunction::zeros(grid), 1.5).unwrap(), 0.0);
    }

    #[test]
    fn scaling_directions() {
        for d in [1, 2] {
            let grid = Grid::default_for(d);
            let g = SampledFunction::gaussian(grid);
            for p in [1.2, 1.5, 1.8] {
                let q = p / (p - 1.0);
                let real = quadratic_form(&g, &g, p).unwrap();
                assert!((real - 0.5 * (q - p)).abs() < 1e-8, "d={d} p={p}");
                let imag = quadratic_form(&g, &g.scale(Complex64::new(0.0, 1.0)), p).unwrap();
                assert!(imag.abs() < 1e-8);
            }
        }
    }

    #[test]
    fn quadratic_homogeneity() {
        let grid = Grid::default_for(1);
        let g = SampledFunction::gaussian(grid);
        let h = SampledFunction::from_real_fn(grid, |x| x[0] * x[0] * x[0] * (-std::f64::consts::PI * x[0] * x[0]).exp());
        let a = quadratic_form(&g, &h, 1.5).unwrap();
        let b = quadratic_form(&g, &h.scale(Complex64::new(3.0, 0.0)), 1.5).unwrap();
        assert!((b - 9.0 * a).abs() < 1e-10 * b.abs());
    }

    #[test]
    fn boundary_growth_flagged() {
        let grid = Grid::new(1, 6.0, 256).unwrap();
        let g = SampledFunction::gaussian(grid);
        let h = SampledFunction::from_real_fn(grid, |x| (-x[0] * x[0] / 4.0).exp());
        assert!(weight_grows_at_boundary(&g, &h, 1.5));
        assert!(matches!(quadratic_form(&g, &h, 1.5), Err(Error::NotControlled(_))));
        assert!(!weight_grows_at_boundary(&g, &g, 1.5));
    }
}
