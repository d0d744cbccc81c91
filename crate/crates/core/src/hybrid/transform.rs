use super::HybridFunction;
use crate::constants::ExponentPair;
use crate::error::{Error, Result};
use crate::grids::{fourier_at, fourier_transform, Grid, SampledFunction};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Torus resolution M_θ used when none is given.
pub const DEFAULT_THETA_RESOLUTION: usize = 256;

/// e^{−2πi j n/M} with the phase reduced in integers.
fn phase(j: usize, n: i64, m: usize) -> Complex64 {
    let m = m as i64;
    let r = (j as i64 * n.rem_euclid(m)) % m;
    Complex64::from_polar(1.0, -2.0 * PI * r as f64 / m as f64)
}

/// Values on θ_j = j/M_θ times a one-dimensional grid, row-major in θ.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusProduct {
    pub m_theta: usize,
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl TorusProduct {
    pub fn at(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.grid.len() + k]
    }

    /// (Σ_{j,k} |v|^q Δx / M_θ)^{1/q}.
    pub fn lq_norm(&self, q: f64) -> f64 {
        let s: f64 = self.values.iter().map(|z| z.norm().powf(q)).sum();
        (s * self.grid.cell_volume() / self.m_theta as f64).powf(1.0 / q)
    }
}

/// 𝔉^×F(θ, ξ) on the θ-grid times the dual x-grid.
pub type HybridSpectrum = TorusProduct;

/// Σ_n e^{−2πiθn} s_n on the θ-grid for slices s_n on a common grid.
fn torus_sum(labels: &[i64], slices: &[SampledFunction], m_theta: usize) -> Result<TorusProduct> {
    if m_theta < 8 {
        return Err(Error::InvalidParameter(format!("M_θ = {m_theta} is below 8")));
    }
    let grid = *slices[0].grid();
    let n = grid.len();
    let rows: Vec<Vec<Complex64>> = (0..m_theta)
        .into_par_iter()
        .map(|j| {
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            for (&label, s) in labels.iter().zip(slices) {
                if s.is_zero() {
                    continue;
                }
                let e = phase(j, label, m_theta);
                for (r, v) in row.iter_mut().zip(s.values()) {
                    *r += e * v;
                }
            }
            row
        })
        .collect();
    Ok(TorusProduct { m_theta, grid, values: rows.into_iter().flatten().collect() })
}

/// Partial transform ℱF(θ, x) = Σ_n e^{−2πiθn}F(n, x).
pub fn partial_transform(f: &HybridFunction, m_theta: usize) -> Result<TorusProduct> {
    let labels: Vec<i64> = f.labels().collect();
    torus_sum(&labels, f.slices(), m_theta)
}

/// 𝔉^×F(θ, ξ): grid transform in x, then the trigonometric sum in n.
pub fn hybrid_fourier(f: &HybridFunction, m_theta: usize) -> Result<HybridSpectrum> {
    let transformed = f.slices().par_iter().map(fourier_transform).collect::<Result<Vec<_>>>()?;
    let labels: Vec<i64> = f.labels().collect();
    torus_sum(&labels, &transformed, m_theta)
}

/// 𝔉^×F at one point (θ, ξ) by direct summation.
pub fn hybrid_fourier_at(f: &HybridFunction, theta: f64, xi: f64) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for (n, slice) in f.labels().zip(f.slices()) {
        if slice.is_zero() {
            continue;
        }
        s += Complex64::from_polar(1.0, -2.0 * PI * theta * n as f64) * fourier_at(slice, &[xi])?[0];
    }
    Ok(s)
}

/// ‖𝔉^×F‖_{L^q(𝕋×ℝ)} / ‖F‖_{L^p(ℤ×ℝ)}.
pub fn hybrid_hy_ratio(f: &HybridFunction, p: f64, m_theta: usize) -> Result<f64> {
    let e = ExponentPair::new(p)?;
    let np = f.lp_norm(e.p)?;
    if np == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(hybrid_fourier(f, m_theta)?.lq_norm(e.q) / np)
}

/// (‖g‖_{L^p_x L^q_θ}, ‖g‖_{L^q_θ L^p_x}), the inner norm written last.
pub fn mixed_norm(g: &TorusProduct, p: f64, q: f64) -> Result<(f64, f64)> {
    if !(p >= 1.0 && q.is_finite()) {
        return Err(Error::InvalidExponent(format!("p = {p}, q = {q}")));
    }
    if q < p {
        return Err(Error::InvalidExponent(format!("q = {q} is below p = {p}")));
    }
    let (mt, n) = (g.m_theta, g.grid.len());
    let dx = g.grid.cell_volume();
    let x_then_theta: f64 = (0..n)
        .map(|k| {
            let inner: f64 = (0..mt).map(|j| g.at(j, k).norm().powf(q)).sum::<f64>() / mt as f64;
            inner.powf(p / q)
        })
        .sum::<f64>()
        * dx;
    let theta_then_x: f64 = (0..mt)
        .map(|j| {
            let inner: f64 = (0..n).map(|k| g.at(j, k).norm().powf(p)).sum::<f64>() * dx;
            inner.powf(q / p)
        })
        .sum::<f64>()
        / mt as f64;
    Ok((x_then_theta.powf(1.0 / p), theta_then_x.powf(1.0 / q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::babenko;
    use rand::{Rng, SeedableRng};

    fn gaussian_single(n0: i64) -> HybridFunction {
        let grid = Grid::default_for(1);
        HybridFunction::single(4, n0, SampledFunction::gaussian(grid)).unwrap()
    }

    #[test]
    fn single_slice_gaussian_is_extremal() {
        for p in [1.2, 1.5, 1.8] {
            let r = hybrid_hy_ratio(&gaussian_single(0), p, DEFAULT_THETA_RESOLUTION).unwrap();
            assert!((r - babenko(p).unwrap()).abs() < 1e-5);
        }
    }

    #[test]
    fn translation_in_n_is_a_phase() {
        let a = hybrid_fourier(&gaussian_single(0), 64).unwrap();
        let b = hybrid_fourier(&gaussian_single(1), 64).unwrap();
        for j in [0, 5, 17, 40] {
            let e = Complex64::from_polar(1.0, -2.0 * PI * j as f64 / 64.0);
            for k in [100, 512, 600] {
                assert!((b.at(j, k) - e * a.at(j, k)).norm() < 1e-12);
                assert!((a.at(j, k) - a.at(0, k)).norm() < 1e-15);
            }
        }
        assert!((a.lq_norm(3.0) - b.lq_norm(3.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_function() {
        let f = HybridFunction::zeros(2, Grid::new(1, 2.0, 32).unwrap()).unwrap();
        assert!(hybrid_fourier(&f, 16).unwrap().values.iter().all(|z| z.norm() == 0.0));
        assert!(matches!(hybrid_hy_ratio(&f, 1.5, 16), Err(Error::ZeroFunction)));
    }

    #[test]
    fn two_equal_slices_fall_short() {
        let grid = Grid::default_for(1);
        let f = HybridFunction::from_fn(4, grid, |n, x| if n == 0 || n == 1 { Complex64::new((-PI * x * x).exp(), 0.0) } else { Complex64::new(0.0, 0.0) }).unwrap();
        let a = babenko(1.5).unwrap();
        let r = hybrid_hy_ratio(&f, 1.5, DEFAULT_THETA_RESOLUTION).unwrap();
        assert!(r <= a - 0.01);
        // ‖1 + e^{−2πiθ}‖_{L³(𝕋)}/2^{2/3} = (32/(3π))^{1/3}/2^{2/3}.
        let factor = (32.0 / (3.0 * PI)).powf(1.0 / 3.0) / 2f64.powf(2.0 / 3.0);
        assert!((r / a - factor).abs() < 1e-8);
    }

    #[test]
    fn discrete_gaussian_factor_falls_short() {
        let grid = Grid::new(1, 8.0, 512).unwrap();
        let f = HybridFunction::from_fn(32, grid, |n, x| Complex64::new((-PI * (n as f64 / 10.0).powi(2)).exp() * (-PI * x * x).exp(), 0.0)).unwrap();
        let r = hybrid_hy_ratio(&f, 1.5, DEFAULT_THETA_RESOLUTION).unwrap();
        assert!(r < babenko(1.5).unwrap());
    }

    #[test]
    fn direct_evaluation_agrees() {
        let grid = Grid::new(1, 4.0, 128).unwrap();
        let f = HybridFunction::from_fn(3, grid, |n, x| Complex64::new((-PI * (x - 0.1 * n as f64).powi(2)).exp(), 0.2 * n as f64 * x)).unwrap();
        let s = hybrid_fourier(&f, 32).unwrap();
        let xi_grid = grid.dual();
        for (j, k) in [(0, 64), (7, 70), (31, 50)] {
            let direct = hybrid_fourier_at(&f, j as f64 / 32.0, xi_grid.coord(k)).unwrap();
            assert!((direct - s.at(j, k)).norm() < 1e-10);
        }
    }

    #[test]
    fn mixed_norms() {
        let grid = Grid::new(1, 3.0, 64).unwrap();
        let u = |j: usize| 1.0 + 0.5 * (2.0 * PI * j as f64 / 32.0).cos();
        let values = (0..32).flat_map(|j| (0..64).map(move |k| Complex64::new(u(j) * (-PI * grid.coord(k).powi(2)).exp(), 0.0))).collect();
        let g = TorusProduct { m_theta: 32, grid, values };
        let (a, b) = mixed_norm(&g, 1.5, 3.0).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        assert!(mixed_norm(&g, 3.0, 1.5).is_err());

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let slices = (0..7)
                .map(|_| {
                    let values = (0..64).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
                    SampledFunction::new(grid, values).unwrap()
                })
                .collect();
            let f = HybridFunction::new(3, grid, slices).unwrap();
            let g = partial_transform(&f, 32).unwrap();
            let (pq, qp) = mixed_norm(&g, 1.5, 3.0).unwrap();
            assert!(qp <= pq * (1.0 + 1e-12));
        }
    }

    #[test]
    fn single_slice_mixed_norm_is_exact() {
        let f = gaussian_single(0);
        let g = partial_transform(&f, 64).unwrap();
        let (pq, _) = mixed_norm(&g, 1.5, 3.0).unwrap();
        assert!((pq / f.lp_norm(1.5).unwrap() - 1.0).abs() < 1e-12);
    }
}
