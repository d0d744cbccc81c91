use super::{constants_for, gaussian_weighted_norm_sq, quadratic_form, split_sharp_flat};
use crate::constants::{babenko, hy_ratio};
use crate::error::{Error, Result};
use crate::grids::{lp_norm, SampledFunction};
use crate::report::VerificationReport;

/// Exponent γ = (3−p)/(2−p) in the smallness condition ‖f‖_p ≤ η^γ‖G‖_p.
pub fn smallness_exponent(p: f64) -> f64 {
    (3.0 - p) / (2.0 - p)
}

/// Compares ‖(G+f)^‖_q/(A_p^d‖G+f‖_p) with
/// 1 + 𝒬_G(f_♯) + Cη‖f_♯‖_p²/‖G‖_p² − cη^{2−p}‖f_♭‖_p^p/‖G‖_p^p
/// at the calibrated (c, C). The smallness condition is reported, not
/// enforced; the orthogonality condition is enforced.
pub fn taylor_substitute_check(f: &SampledFunction, eta: f64, p: f64) -> Result<VerificationReport> {
    let grid = *f.grid();
    let d = grid.dim();
    let g = SampledFunction::gaussian(grid);
    let orth: f64 = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(z, w)| z.re * w.re.powf(p - 1.0))
        .sum::<f64>()
        * grid.cell_volume();
    let scale = gaussian_weighted_norm_sq(f, p).sqrt();
    if orth.abs() > 1e-8 * scale.max(1.0) {
        return Err(Error::Precondition(format!("Re∫f·G^(p−1) = {orth:e} is not zero")));
    }
    let split = split_sharp_flat(f, &g, eta)?;
    let k = constants_for(p, eta)?;
    let a = babenko(p)?.powi(d as i32);
    let lhs = hy_ratio(&f.add(&g)?, p)? / a;
    let norm_g = lp_norm(&g, p)?;
    let norm_f = lp_norm(f, p)?;
    let q_sharp = quadratic_form(&g, &split.sharp, p)?;
    let sharp_penalty = k.big_c * eta * (lp_norm(&split.sharp, p)? / norm_g).powi(2);
    let norm_flat = lp_norm(&split.flat, p)?;
    let flat_gain = k.c * eta.powf(2.0 - p) * (norm_flat / norm_g).powf(p);
    let rhs = 1.0 + q_sharp + sharp_penalty - flat_gain;
    let gamma = smallness_exponent(p);
    let small = norm_f <= eta.powf(gamma) * norm_g;
    let tol = 1e-12;
    let mut r = VerificationReport::new("taylor_substitute", "second-variation/taylor-substitute")
        .param("p", p)
        .param("eta", eta)
        .param("d", d as u64)
        .param("c", k.c)
        .param("C", k.big_c)
        .computed("lhs", lhs)
        .computed("rhs", rhs)
        .computed("margin", rhs - lhs)
        .computed("quadratic_sharp", q_sharp)
        .computed("sharp_penalty", sharp_penalty)
        .computed("flat_gain", flat_gain)
        .computed("norm_flat_p", norm_flat)
        .computed("norm_f_p", norm_f)
        .computed("small_enough", small)
        .reference("gamma", gamma)
        .tolerance(tol)
        .pass(lhs <= rhs + tol);
    if !small {
        r = r.note(format!("‖f‖_p exceeds η^γ‖G‖_p with γ = {gamma}; the bound is not guaranteed"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::Grid;
    use crate::second_variation::normal_direction;
    use num_complex::Complex64;

    #[test]
    fn zero_perturbation_is_equality() {
        let grid = Grid::default_for(1);
        let r = taylor_substitute_check(&SampledFunction::zeros(grid), 0.1, 1.5).unwrap();
        let lhs = r.computed["lhs"].as_f64().unwrap();
        assert!((lhs - 1.0).abs() < 1e-12);
        assert_eq!(r.computed["rhs"].as_f64().unwrap(), 1.0);
        assert!(r.pass);
    }

    #[test]
    fn cubic_direction_has_positive_margin() {
        let grid = Grid::default_for(1);
        let f = normal_direction(&[3], 1.5, &grid).unwrap().scale(Complex64::new(0.01, 0.0));
        let r = taylor_substitute_check(&f, 0.1, 1.5).unwrap();
        assert!(r.pass);
        assert!(r.computed["margin"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn spike_shows_flat_gain() {
        let grid = Grid::default_for(1);
        let mut f = normal_direction(&[3], 1.5, &grid).unwrap().scale(Complex64::new(0.01, 0.0));
        let mid = grid.points_per_axis() / 2;
        f.values_mut()[mid] += Complex64::new(0.0, 2.0);
        let r = taylor_substitute_check(&f, 0.1, 1.5).unwrap();
        assert!(r.computed["flat_gain"].as_f64().unwrap() > 0.0);
        assert!(r.pass);
    }

    #[test]
    fn orthogonality_enforced() {
        let grid = Grid::default_for(1);
        let f = SampledFunction::gaussian(grid).scale(Complex64::new(0.01, 0.0));
        assert!(matches!(taylor_substitute_check(&f, 0.1, 1.5), Err(Error::Precondition(_))));
    }
}
