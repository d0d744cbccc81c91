use super::HybridFunction;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Splits F = g + h column by column in x. Where one n carries more than
/// `threshold` of the ℓ¹ mass Σ_n |F(n, x)|, g keeps that entry and h the rest;
/// elsewhere h takes the whole column.
pub fn single_point_decomposition(f: &HybridFunction, threshold: f64) -> Result<(HybridFunction, HybridFunction)> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!("threshold = {threshold} outside (0, 1]")));
    }
    let grid = *f.grid();
    let mut g = HybridFunction::zeros(f.half_range(), grid)?;
    let mut h = f.clone();
    for k in 0..grid.len() {
        let column = f.slices().iter().map(|s| s.values()[k].norm());
        let total: f64 = column.clone().sum();
        if total == 0.0 {
            continue;
        }
        let (i, top) = column.enumerate().fold((0, -1.0), |best, (i, a)| if a > best.1 { (i, a) } else { best });
        if top > threshold * total {
            let v = std::mem::replace(&mut h.slices_mut()[i].values_mut()[k], Complex64::new(0.0, 0.0));
            g.slices_mut()[i].values_mut()[k] = v;
        }
    }
    Ok((g, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::{Grid, SampledFunction};
    use crate::hybrid::lift;
    use crate::constants::{babenko, hy_ratio};
    use std::f64::consts::PI;

    #[test]
    fn single_slice_goes_to_g() {
        let f = HybridFunction::single(3, 1, SampledFunction::gaussian(Grid::new(1, 4.0, 64).unwrap())).unwrap();
        let (g, h) = single_point_decomposition(&f, 0.5).unwrap();
        assert_eq!(g, f);
        assert!(h.is_zero());
    }

    #[test]
    fn equal_slices_go_to_h() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let f = HybridFunction::from_fn(2, grid, |n, x| Complex64::new(if n == 0 || n == -1 { (-PI * x * x).exp() } else { 0.0 }, 0.0)).unwrap();
        let (g, h) = single_point_decomposition(&f, 0.6).unwrap();
        assert!(g.is_zero());
        assert_eq!(h, f);
    }

    #[test]
    fn parts_are_disjoint_and_sum_back() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let f = HybridFunction::from_fn(2, grid, |n, x| Complex64::new((x + n as f64).sin(), (n as f64 * x).cos())).unwrap();
        let (g, h) = single_point_decomposition(&f, 0.3).unwrap();
        assert_eq!(g.add(&h).unwrap(), f);
        for (a, b) in g.slices().iter().zip(h.slices()) {
            for (u, v) in a.values().iter().zip(b.values()) {
                assert!(u.norm() == 0.0 || v.norm() == 0.0);
            }
        }
    }

    #[test]
    fn remainder_tracks_deficit() {
        // G_w(x) + t·G_w(x − 1) at decreasing t: deficit and remainder fall together
        let grid = Grid::new(1, 8.0, 4096).unwrap();
        let w = 0.025;
        let a = babenko(1.5).unwrap();
        let rows: Vec<(f64, f64)> = [0.5, 0.2, 0.05]
            .iter()
            .map(|&t| {
                let f = SampledFunction::from_real_fn(grid, |x| (-PI * (x[0] / w).powi(2)).exp() + t * (-PI * ((x[0] - 1.0) / w).powi(2)).exp());
                let deficit = 1.0 - hy_ratio(&f, 1.5).unwrap() / a;
                let lifted = lift(&f, 0.1).unwrap();
                let (_, h) = single_point_decomposition(&lifted, 0.5).unwrap();
                (deficit, h.lp_norm(1.5).unwrap() / lifted.lp_norm(1.5).unwrap())
            })
            .collect();
        assert!(rows.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1), "{rows:?}");
    }
}
