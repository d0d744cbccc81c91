use super::{hybrid_hy_ratio, HybridFunction, DEFAULT_THETA_RESOLUTION};
use crate::constants::{babenko, hy_ratio};
use crate::error::{Error, Result};
use crate::grids::{Grid, SampledFunction};
use crate::report::VerificationReport;
use num_complex::Complex64;

/// Relative L¹ mass allowed outside the δ-neighbourhood of ℤ.
pub const SUPPORT_TOLERANCE: f64 = 1e-10;

/// Samples per unit length, required to be an integer so that n + x_k lands on
/// the grid again.
fn samples_per_unit(grid: &Grid) -> Result<i64> {
    let s = 1.0 / grid.spacing();
    let r = s.round();
    if r < 1.0 || (s - r).abs() > 1e-9 * r {
        return Err(Error::InvalidGrid(format!("1/Δx = {s} is not an integer")));
    }
    Ok(r as i64)
}

/// Largest M with M + δ < L.
fn lift_range(grid: &Grid, delta: f64) -> usize {
    let m = (grid.half_width() - delta).floor();
    let m = if m + delta >= grid.half_width() { m - 1.0 } else { m };
    m.max(0.0) as usize
}

/// n with |x − n| ≤ δ and |n| ≤ M, if any.
fn lattice_label(x: f64, delta: f64, m: usize) -> Option<i64> {
    let n = x.round();
    ((x - n).abs() <= delta && n.abs() <= m as f64).then_some(n as i64)
}

/// F(n, x) = f(n + x) for |x| ≤ δ, zero otherwise, on the grid of f.
pub fn lift(f: &SampledFunction, delta: f64) -> Result<HybridFunction> {
    let grid = *f.grid();
    if grid.dim() != 1 {
        return Err(Error::InvalidGrid("lift needs a one-dimensional grid".into()));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!("δ = {delta} outside (0, 1/2)")));
    }
    let per_unit = samples_per_unit(&grid)?;
    let m = lift_range(&grid, delta);

    let total: f64 = f.values().iter().map(|z| z.norm()).sum();
    let outside: f64 = f
        .values()
        .iter()
        .enumerate()
        .filter(|&(j, _)| lattice_label(grid.coord(j), delta, m).is_none())
        .map(|(_, z)| z.norm())
        .sum();
    if total > 0.0 && outside > SUPPORT_TOLERANCE * total {
        return Err(Error::Precondition(format!(
            "relative mass {:.3e} lies farther than δ = {delta} from ℤ",
            outside / total
        )));
    }

    let n_pts = grid.len() as i64;
    let slices = (0..=2 * m as i64)
        .map(|k| {
            let n = k - m as i64;
            let values = (0..n_pts)
                .map(|j| {
                    let src = j + n * per_unit;
                    if grid.coord(j as usize).abs() <= delta && (0..n_pts).contains(&src) {
                        f.values()[src as usize]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            SampledFunction::new(grid, values)
        })
        .collect::<Result<Vec<_>>>()?;
    HybridFunction::new(m, grid, slices)
}

/// Compares the HY ratio of f with that of its lift. The lift passes when its
/// normalized ratio is at least 1 − deficit(f) − C·δ^γ, with (C, γ) = fit or
/// (1, 1).
pub fn lift_near_extremizer_check(f: &SampledFunction, delta: f64, p: f64, fit: Option<(f64, f64)>) -> Result<VerificationReport> {
    let a = babenko(p)?;
    let (c_fit, gamma) = fit.unwrap_or((1.0, 1.0));
    let ratio_f = hy_ratio(f, p)? / a;
    let lifted = lift(f, delta)?;
    let ratio_lift = hybrid_hy_ratio(&lifted, p, DEFAULT_THETA_RESOLUTION)? / a;
    let deficit_f = 1.0 - ratio_f;
    let floor = 1.0 - deficit_f - c_fit * delta.powf(gamma);
    Ok(VerificationReport::new("lift_near_extremizer", "hybrid/lift-near-extremizer")
        .param("p", p)
        .param("delta", delta)
        .param("c_fit", c_fit)
        .param("gamma_fit", gamma)
        .computed("ratio_f", ratio_f)
        .computed("ratio_lift", ratio_lift)
        .computed("deficit_f", deficit_f)
        .computed("gap", (ratio_f - ratio_lift).abs())
        .reference("floor", floor)
        .pass(ratio_lift >= floor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::{fourier_at, lp_norm};
    use crate::hybrid::hybrid_fourier_at;
    use std::f64::consts::PI;

    fn fine_grid() -> Grid {
        Grid::new(1, 8.0, 8192).unwrap()
    }

    /// Smooth bump of half-width h centred at c.
    fn bump(x: f64, c: f64, h: f64) -> f64 {
        let u = (x - c) / h;
        if u.abs() < 1.0 {
            (-1.0 / (1.0 - u * u)).exp()
        } else {
            0.0
        }
    }

    fn bumps(grid: Grid, delta: f64, coeffs: &[(i64, f64)]) -> SampledFunction {
        SampledFunction::from_real_fn(grid, |x| coeffs.iter().map(|&(n, c)| c * bump(x[0], n as f64, 0.8 * delta)).sum())
    }

    fn narrow_gaussian(grid: Grid, delta: f64) -> SampledFunction {
        let w = delta / 4.0;
        SampledFunction::from_real_fn(grid, |x| (-PI * (x[0] / w).powi(2)).exp())
    }

    fn five_bumps() -> Vec<(i64, f64)> {
        vec![(-2, 0.3), (-1, 1.0), (0, 0.7), (1, -0.5), (2, 0.9)]
    }

    #[test]
    fn norm_is_preserved() {
        let grid = Grid::new(1, 8.0, 1024).unwrap();
        let coeffs: Vec<_> = (-5..=5).map(|n| (n, 1.0 + 0.1 * n as f64)).collect();
        let f = bumps(grid, 0.1, &coeffs);
        let lifted = lift(&f, 0.1).unwrap();
        for p in [1.2, 1.5, 2.0] {
            let (a, b) = (lp_norm(&f, p).unwrap(), lifted.lp_norm(p).unwrap());
            assert!((a - b).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn single_bump_lands_on_its_label() {
        let grid = Grid::new(1, 8.0, 1024).unwrap();
        let f = bumps(grid, 0.1, &[(3, 1.0)]);
        let lifted = lift(&f, 0.1).unwrap();
        for n in lifted.labels() {
            assert_eq!(lifted.slice(n).unwrap().is_zero(), n != 3);
        }
        let slice = lifted.slice(3).unwrap();
        let expected = SampledFunction::from_real_fn(grid, |x| bump(x[0], 0.0, 0.08));
        assert!(slice.sub(&expected).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn support_violation_is_refused() {
        let grid = Grid::new(1, 8.0, 1024).unwrap();
        let f = SampledFunction::from_real_fn(grid, |x| (-PI * x[0] * x[0]).exp());
        assert!(matches!(lift(&f, 0.1), Err(Error::Precondition(_))));
        assert!(matches!(lift(&SampledFunction::gaussian(Grid::new(1, 8.0, 1000).unwrap()), 0.1), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn diagonal_identity() {
        let grid = Grid::new(1, 8.0, 1024).unwrap();
        let f = bumps(grid, 0.1, &five_bumps());
        let lifted = lift(&f, 0.1).unwrap();
        for theta in [0.0, 0.13, 0.5, 0.77] {
            for k in -3..=3 {
                let xi = k as f64 + theta;
                let lhs = hybrid_fourier_at(&lifted, theta, xi).unwrap();
                let rhs = fourier_at(&f, &[xi]).unwrap()[0];
                assert!((lhs - rhs).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn narrow_gaussian_lift_stays_extremal() {
        let f = narrow_gaussian(fine_grid(), 0.1);
        let r = lift_near_extremizer_check(&f, 0.1, 1.5, None).unwrap();
        assert!(r.pass);
        let gap = r.computed["gap"].as_f64().unwrap();
        assert!(gap < 0.02, "gap {gap}");
        assert!(r.computed["ratio_f"].as_f64().unwrap() > 0.9999);
    }

    #[test]
    fn spread_bumps_are_comparable() {
        let f = bumps(fine_grid(), 0.1, &five_bumps());
        let r = lift_near_extremizer_check(&f, 0.1, 1.5, None).unwrap();
        let (rf, rl) = (r.computed["ratio_f"].as_f64().unwrap(), r.computed["ratio_lift"].as_f64().unwrap());
        assert!(rf < 0.95 && rl < 0.95);
        assert!((rf - rl).abs() < 0.05, "{rf} {rl}");
        assert!(r.pass);
    }

    #[test]
    fn gap_shrinks_with_delta() {
        let gaps: Vec<f64> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&d| {
                // |ĉ(θ)| stays away from 0 so the ξ-quadrature does not mask the gap
                let f = bumps(fine_grid(), d, &[(-2, 0.1), (-1, 0.3), (0, 1.0), (1, -0.2), (2, 0.15)]);
                lift_near_extremizer_check(&f, d, 1.5, None).unwrap().computed["gap"].as_f64().unwrap()
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
        assert!(gaps[0] < 1e-5);
    }
}
