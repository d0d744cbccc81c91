use super::optim::{bfgs, BfgsOptions};
use super::poly::{Gaussian, QuadraticPolynomial};
use super::projection::{moment_init, project};
use crate::error::{Error, Result};
use crate::grids::{lp_norm, SampledFunction};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct DistanceResult {
    pub dist: f64,
    pub argmin: Gaussian,
    /// Local minima found from each start, in start order.
    pub start_values: Vec<f64>,
    /// Fewer than two starts reached the best value within 1e−6 (relative).
    pub disagreement: bool,
}

/// Unconstrained coordinates: the Cholesky factor of A (log-diagonal),
/// then Re b, Im b per axis, then Re c, Im c.
fn to_theta(g: &Gaussian) -> Vec<f64> {
    let p = &g.params;
    let d = p.dim();
    let l = p.a().clone().cholesky().expect("positive definite").l();
    let mut t = Vec::new();
    for i in 0..d {
        for j in 0..=i {
            t.push(if i == j { l[(i, i)].ln() } else { l[(i, j)] });
        }
    }
    for b in p.b() {
        t.push(b.re);
        t.push(b.im);
    }
    t.push(p.c().re);
    t.push(p.c().im);
    t
}

fn cholesky_factor(d: usize, t: &[f64]) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(d, d);
    let mut k = 0;
    for i in 0..d {
        for j in 0..=i {
            l[(i, j)] = if i == j { t[k].exp() } else { t[k] };
            k += 1;
        }
    }
    l
}

fn from_theta(d: usize, t: &[f64]) -> Option<Gaussian> {
    let l = cholesky_factor(d, t);
    let a = &l * l.transpose();
    let k = d * (d + 1) / 2;
    let b = (0..d).map(|m| Complex64::new(t[k + 2 * m], t[k + 2 * m + 1])).collect();
    let c = Complex64::new(t[k + 2 * d], t[k + 2 * d + 1]);
    QuadraticPolynomial::new(a, b, c).ok().map(Gaussian::new)
}

/// ‖f − exp(P_θ)‖_p^p and its gradient in θ.
fn objective(f: &SampledFunction, p: f64, t: &[f64]) -> Option<(f64, Vec<f64>)> {
    let grid = f.grid();
    let d = grid.dim();
    let l = cholesky_factor(d, t);
    let k = d * (d + 1) / 2;
    let b: Vec<Complex64> = (0..d).map(|m| Complex64::new(t[k + 2 * m], t[k + 2 * m + 1])).collect();
    let c = Complex64::new(t[k + 2 * d], t[k + 2 * d + 1]);
    let n = t.len();
    let mut val = 0.0;
    let mut grad = vec![0.0; n];
    let mut dp = vec![Complex64::new(0.0, 0.0); n];
    for (idx, &fv) in f.values().iter().enumerate() {
        let xx = grid.point(idx);
        let x = &xx[..d];
        // u = Lᵀx, P = −|u|² + b·x + c.
        let mut u = [0.0; 2];
        for j in 0..d {
            u[j] = (j..d).map(|i| l[(i, j)] * x[i]).sum();
        }
        let quad: f64 = u[..d].iter().map(|v| v * v).sum();
        let lin: Complex64 = b.iter().zip(x).map(|(b, &x)| b * x).sum();
        let pv = Complex64::new(-quad, 0.0) + lin + c;
        if pv.re > 700.0 {
            return None;
        }
        let gv = pv.exp();
        let r = fv - gv;
        let rn = r.norm();
        if rn == 0.0 {
            continue;
        }
        val += rn.powf(p);
        // ∂|r|^p/∂θ = −p |r|^{p−2} Re(r̄ g ∂P/∂θ).
        let coef = r.conj() * gv * (-p * rn.powf(p - 2.0));
        let mut m = 0;
        for i in 0..d {
            for j in 0..=i {
                let mut v = -2.0 * u[j] * x[i];
                if i == j {
                    v *= l[(i, i)];
                }
                dp[m] = Complex64::new(v, 0.0);
                m += 1;
            }
        }
        for &xk in x {
            dp[m] = Complex64::new(xk, 0.0);
            dp[m + 1] = Complex64::new(0.0, xk);
            m += 2;
        }
        dp[m] = Complex64::new(1.0, 0.0);
        dp[m + 1] = Complex64::new(0.0, 1.0);
        for (g, dpi) in grad.iter_mut().zip(&dp) {
            *g += (coef * dpi).re;
        }
    }
    let dv = grid.cell_volume();
    grad.iter_mut().for_each(|g| *g *= dv);
    Some((val * dv, grad))
}

/// inf over Gaussians g of ‖f − g‖_p by multi-start BFGS. Starts are the
/// moment guess, the projection π(f) when it converges, and `extra_starts`
/// seeded perturbations of the moment guess.
pub fn dist_to_gaussians(f: &SampledFunction, p: f64, extra_starts: usize, seed: u64) -> Result<DistanceResult> {
    let nf = lp_norm(f, p)?;
    if nf == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let d = f.grid().dim();
    let init = moment_init(f, p)?;
    let mut starts = vec![to_theta(&init)];
    if let Ok(pr) = project(f, p) {
        if pr.converged {
            starts.push(to_theta(&pr.pi));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = starts[0].clone();
    for _ in 0..extra_starts {
        starts.push(base.iter().map(|v| v + rng.random_range(-0.3..0.3)).collect());
    }
    let opts = BfgsOptions::default();
    let runs: Vec<Option<(f64, Vec<f64>)>> = starts
        .par_iter()
        .map(|t0| {
            let r = bfgs(|t| objective(f, p, t), t0, opts)?;
            Some((r.value, r.x))
        })
        .collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut values = Vec::with_capacity(runs.len());
    for (v, x) in runs.into_iter().flatten() {
        values.push(v.powf(1.0 / p));
        if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
            best = Some((v, x));
        }
    }
    let (bv, bx) = best.ok_or_else(|| Error::InvalidFunction("no start produced a finite objective".into()))?;
    let dist = bv.powf(1.0 / p);
    let agree = values.iter().filter(|&&v| (v - dist).abs() <= 1e-6 * nf.max(dist)).count();
    let argmin = from_theta(d, &bx).ok_or_else(|| Error::InvalidFunction("optimum left the manifold".into()))?;
    Ok(DistanceResult { dist, argmin, start_values: values, disagreement: agree < 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::sample;
    use crate::grids::Grid;
    use std::f64::consts::PI;

    fn numeric_grad(f: &SampledFunction, p: f64, t: &[f64]) -> Vec<f64> {
        (0..t.len())
            .map(|i| {
                let h = 1e-6;
                let mut a = t.to_vec();
                let mut b = t.to_vec();
                a[i] += h;
                b[i] -= h;
                (objective(f, p, &a).unwrap().0 - objective(f, p, &b).unwrap().0) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for d in [1, 2] {
            let grid = Grid::new(d, 5.0, 64).unwrap();
            let f = SampledFunction::from_fn(grid, |x| Complex64::new((-(x[0] * x[0] + x[1] * x[1])).exp(), 0.2 * x[0] * (-x[0] * x[0]).exp()));
            let t: Vec<f64> = (0..super::super::basis_len(d)).map(|i| 0.1 * (i as f64).sin()).collect();
            let (_, g) = objective(&f, 1.5, &t).unwrap();
            let ng = numeric_grad(&f, 1.5, &t);
            for (a, b) in g.iter().zip(&ng) {
                assert!((a - b).abs() < 1e-6 * (1.0 + b.abs()), "d={d}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn zero_on_manifold() {
        let grid = Grid::default_for(1);
        let g = Gaussian::new(QuadraticPolynomial::standard(1).translate(&[0.4]));
        let r = dist_to_gaussians(&sample(&g, &grid).unwrap(), 1.5, 2, 1).unwrap();
        assert!(r.dist < 1e-8, "{}", r.dist);
    }

    #[test]
    fn normal_perturbation_bounds() {
        let grid = Grid::default_for(1);
        let v = 1.0 / (2.0 * PI * 1.5);
        let e3 = SampledFunction::from_real_fn(grid, |x| (x[0].powi(3) - 3.0 * v * x[0]) * (-PI * x[0] * x[0]).exp());
        let f = SampledFunction::gaussian(grid).add(&e3.scale(Complex64::new(0.05, 0.0))).unwrap();
        let star = 0.05 * lp_norm(&e3, 1.5).unwrap();
        let r = dist_to_gaussians(&f, 1.5, 4, 2).unwrap();
        assert!(r.dist <= star * (1.0 + 1e-9) && r.dist >= 0.9 * star, "{} vs {}", r.dist, star);
    }

    #[test]
    fn indicator_is_far() {
        let grid = Grid::default_for(1);
        let f = SampledFunction::from_real_fn(grid, |x| if x[0].abs() <= 0.5 { 1.0 } else { 0.0 });
        let r = dist_to_gaussians(&f, 1.5, 20, 3).unwrap();
        assert!(r.dist >= 0.05);
        let r2 = dist_to_gaussians(&f, 1.5, 20, 4).unwrap();
        assert!((r.dist - r2.dist).abs() < 1e-4);
    }
}
