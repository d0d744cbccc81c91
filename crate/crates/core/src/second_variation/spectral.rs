use super::{gaussian_weighted_norm_sq, quadratic_form};
use crate::error::{Error, Result};
use crate::grids::SampledFunction;
use crate::report::VerificationReport;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Multi-indices of order ≤ 2 in dimension d, by increasing order.
fn low_order_indices(d: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for order in 0..=2 {
        for a in (0..=order).rev() {
            let b = order - a;
            if d == 1 && b > 0 {
                continue;
            }
            out.push([a, b]);
        }
    }
    out
}

fn monomial(x: [f64; 2], alpha: [usize; 2]) -> f64 {
    x[0].powi(alpha[0] as i32) * x[1].powi(alpha[1] as i32)
}

/// ∫ h x^α G^{p−1} for every |α| ≤ 2, each paired with the Cauchy–Schwarz
/// scale (∫|h|²G^{p−2})^{1/2}(∫x^{2α}G^p)^{1/2}.
pub fn gaussian_moments(h: &SampledFunction, p: f64) -> Vec<([usize; 2], Complex64, f64)> {
    let grid = h.grid();
    let vol = grid.cell_volume();
    let hn = gaussian_weighted_norm_sq(h, p).sqrt();
    low_order_indices(grid.dim())
        .into_iter()
        .map(|alpha| {
            let mut m = Complex64::new(0.0, 0.0);
            let mut s = 0.0;
            for (i, z) in h.values().iter().enumerate() {
                let x = grid.point(i);
                let r2 = x[0] * x[0] + x[1] * x[1];
                let mono = monomial(x, alpha);
                m += z * mono * (-PI * (p - 1.0) * r2).exp();
                s += mono * mono * (-PI * p * r2).exp();
            }
            (alpha, m * vol, hn * (s * vol).sqrt())
        })
        .collect()
}

/// 𝒬_G(h) ≤ −½(2−p)(p−1)p^{d/2}∫|h|²G^{p−2} for h whose complex moments of
/// order ≤ 1 and real moments of order 2 against G^{p−1} vanish.
pub fn spectral_bound_check(h: &SampledFunction, p: f64) -> Result<VerificationReport> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidExponent(format!("p = {p} outside (1, 2)")));
    }
    let d = h.grid().dim();
    let mut offending = Vec::new();
    for (alpha, m, scale) in gaussian_moments(h, p) {
        let order = alpha[0] + alpha[1];
        let value = if order <= 1 { m.norm() } else { m.re.abs() };
        if value > 1e-8 * scale.max(1e-300) {
            offending.push(format!("α = ({}, {}): {:e}", alpha[0], alpha[1], value));
        }
    }
    if !offending.is_empty() {
        return Err(Error::Precondition(format!("moment conditions violated: {}", offending.join("; "))));
    }
    let weighted = gaussian_weighted_norm_sq(h, p);
    let q = quadratic_form(&SampledFunction::gaussian(*h.grid()), h, p)?;
    let bound = -0.5 * (2.0 - p) * (p - 1.0) * p.powf(d as f64 / 2.0) * weighted;
    let tol = 1e-6 * weighted.max(1e-300);
    Ok(VerificationReport::new("spectral_bound", "second-variation/spectral-bound")
        .param("p", p)
        .param("d", d as u64)
        .computed("quadratic_form", q)
        .computed("weighted_norm_sq", weighted)
        .computed("ratio_to_bound", if bound != 0.0 { q / bound } else { f64::NAN })
        .reference("bound", bound)
        .tolerance(tol)
        .pass(q <= bound + tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::Grid;
    use crate::second_variation::normal_direction;

    #[test]
    fn real_cubic_direction() {
        let grid = Grid::default_for(1);
        for p in [1.2, 1.5, 1.8] {
            let h = normal_direction(&[3], p, &grid).unwrap();
            let r = spectral_bound_check(&h, p).unwrap();
            assert!(r.pass);
            // Exact value ½p^{1/2}((p−1)³ − (p−1)), which is p times the bound.
            let q = r.computed["quadratic_form"].as_f64().unwrap();
            assert!((q - 0.5 * p.sqrt() * ((p - 1.0).powi(3) - (p - 1.0))).abs() < 1e-8);
            assert!((r.computed["ratio_to_bound"].as_f64().unwrap() - p).abs() < 1e-7);
        }
    }

    #[test]
    fn imaginary_quadratic_direction() {
        let grid = Grid::default_for(1);
        let p = 1.5;
        let h = normal_direction(&[2], p, &grid).unwrap().scale(Complex64::new(0.0, 1.0));
        let r = spectral_bound_check(&h, p).unwrap();
        assert!(r.pass);
        let q = r.computed["quadratic_form"].as_f64().unwrap();
        assert!((q - 0.5 * p.sqrt() * ((p - 1.0).powi(2) - 1.0)).abs() < 1e-8);
    }

    #[test]
    fn linear_direction_refused() {
        let grid = Grid::default_for(1);
        let h = normal_direction(&[1], 1.5, &grid).unwrap();
        match spectral_bound_check(&h, 1.5) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("α = (1, 0)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn higher_directions_two_dimensions() {
        let grid = Grid::new(2, 6.0, 128).unwrap();
        let p = 1.5;
        for alpha in [[3, 0], [2, 1], [1, 2], [0, 4]] {
            let h = normal_direction(&alpha, p, &grid).unwrap();
            let r = spectral_bound_check(&h, p).unwrap();
            assert!(r.pass, "{alpha:?}: {:?}", r.computed);
        }
    }
}
