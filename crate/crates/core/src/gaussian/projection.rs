use super::poly::{basis_len, basis_monomials, sample, Gaussian, QuadraticPolynomial};
use crate::error::{Error, Result};
use crate::grids::{lp_norm, lp_norm_pow, SampledFunction};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Below this modulus of g the weight ḡ|g|^{p−2} is treated as zero.
const WEIGHT_FLOOR_LN: f64 = -690.775_527_898_213_7; // ln(1e−300)

pub const MAX_ITER: usize = 200;
/// Converged when sup|R| < CONVERGENCE_TOL · ‖f‖_p^p.
pub const CONVERGENCE_TOL: f64 = 1e-9;
/// Refuses to iterate when the starting residual exceeds this fraction of ‖f‖_p^p.
pub const BASIN_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct ProjectionResult {
    pub pi: Gaussian,
    pub perp: SampledFunction,
    pub dist_star: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Final sup-norm of the normal residuals relative to ‖f‖_p^p.
    pub residual: f64,
    pub clamped: bool,
    pub message: String,
}

/// Per-point data for residual and Jacobian assembly.
struct Assembly {
    residual: DVector<f64>,
    jacobian: DMatrix<f64>,
    clamped: bool,
}

fn assemble(f: &SampledFunction, g: &Gaussian, p: f64, with_jacobian: bool) -> Assembly {
    let grid = f.grid();
    let d = grid.dim();
    let k = basis_len(d);
    let dv = grid.cell_volume();
    let mut residual = DVector::zeros(k);
    let mut jacobian = DMatrix::zeros(k, k);
    let mut basis = Vec::with_capacity(k);
    let mut clamped = false;
    for (idx, &fv) in f.values().iter().enumerate() {
        let x = grid.point(idx);
        let pv = g.params.eval(&x[..d]);
        if pv.re < WEIGHT_FLOOR_LN {
            clamped |= fv.norm() > 0.0;
            continue;
        }
        let gv = pv.exp();
        // ḡ|g|^{p−2} = exp((p−1)Re P − i Im P).
        let w = Complex64::new((p - 1.0) * pv.re, -pv.im).exp();
        let gp = ((p) * pv.re).exp();
        let r = fv - gv;
        let rw = r * w;
        basis_monomials(&x[..d], &mut basis);
        for i in 0..k {
            residual[i] += (rw * basis[i]).re;
        }
        if with_jacobian {
            for j in 0..k {
                let bj = basis[j];
                let dj = -bj * gp + rw * (bj.conj() + (p - 2.0) * bj.re);
                for i in 0..k {
                    jacobian[(i, j)] += (dj * basis[i]).re;
                }
            }
        }
    }
    Assembly { residual: residual * dv, jacobian: jacobian * dv, clamped }
}

/// Entries Re ∫ (f − g) P_i ḡ |g|^{p−2} over the tangent basis, with the
/// integrand set to zero where |g| < 1e−300.
pub fn normal_residuals(f: &SampledFunction, g: &Gaussian, p: f64) -> Result<Vec<f64>> {
    if g.params.dim() != f.grid().dim() {
        return Err(Error::InvalidParameter("Gaussian and grid dimensions differ".into()));
    }
    f.validate()?;
    Ok(assemble(f, g, p, false).residual.iter().copied().collect())
}

/// Moment-matching initial guess: covariance and centre of |f|^p, mass from
/// ‖f‖_p^p, and phase slope from neighbouring-sample correlations.
pub fn moment_init(f: &SampledFunction, p: f64) -> Result<Gaussian> {
    let grid = f.grid();
    let d = grid.dim();
    let dv = grid.cell_volume();
    let w: Vec<f64> = f.values().iter().map(|z| z.norm().powf(p)).collect();
    let mass: f64 = w.iter().sum::<f64>() * dv;
    if mass == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let mut mu = vec![0.0; d];
    for (i, &wi) in w.iter().enumerate() {
        let x = grid.point(i);
        for k in 0..d {
            mu[k] += x[k] * wi * dv / mass;
        }
    }
    let mut cov = DMatrix::zeros(d, d);
    for (i, &wi) in w.iter().enumerate() {
        let x = grid.point(i);
        for m in 0..d {
            for n in 0..d {
                cov[(m, n)] += (x[m] - mu[m]) * (x[n] - mu[n]) * wi * dv / mass;
            }
        }
    }
    let cov_inv = cov.clone().try_inverse().ok_or_else(|| Error::InvalidFunction("degenerate second moments".into()))?;
    let a = cov_inv / (2.0 * p);
    let a = (&a + a.transpose()) * 0.5;
    let mu_v = DVector::from_vec(mu.clone());
    let b_re = &a * &mu_v * 2.0;
    let mu_a_mu = mu_v.dot(&(&a * &mu_v));
    let det_pa = (&a * p).determinant();
    if !(det_pa > 0.0) {
        return Err(Error::InvalidFunction("second moments not positive definite".into()));
    }
    let c_re = (mass * det_pa.sqrt() / PI.powf(d as f64 / 2.0)).ln() / p - mu_a_mu;

    // Phase slope per axis from Σ f(x+Δ e_k) f̄(x) w(x).
    let n = grid.points_per_axis();
    let dx = grid.spacing();
    let mut b_im = vec![0.0; d];
    for (k, slot) in b_im.iter_mut().enumerate() {
        // Row-major: the last axis has stride 1.
        let stride = if k + 1 == d { 1 } else { n };
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..grid.len() {
            let along = grid.unflatten(i)[if d == 1 { 0 } else { k }];
            if along + 1 >= n {
                continue;
            }
            acc += f.values()[i + stride] * f.values()[i].conj() * w[i];
        }
        *slot = acc.arg() / dx;
    }
    let b: Vec<Complex64> = (0..d).map(|k| Complex64::new(b_re[k], b_im[k])).collect();
    let trial = QuadraticPolynomial::new(a.clone(), b.clone(), Complex64::new(c_re, 0.0))?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &fv) in f.values().iter().enumerate() {
        let x = grid.point(i);
        acc += fv * trial.eval(&x[..d]).exp().conj() * w[i];
    }
    let c = Complex64::new(c_re, acc.arg());
    Ok(Gaussian::new(QuadraticPolynomial::new(a, b, c)?))
}

fn sup(v: &DVector<f64>) -> f64 {
    v.amax()
}

/// Newton solve for the Gaussian π(f) whose normal residuals vanish, so that
/// f − π(f) lies in the normal space at π(f).
pub fn project(f: &SampledFunction, p: f64) -> Result<ProjectionResult> {
    project_from(f, p, None)
}

/// [`project`] with an optional starting Gaussian in place of the moment guess.
pub fn project_from(f: &SampledFunction, p: f64, start: Option<&Gaussian>) -> Result<ProjectionResult> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(format!("p = {p}")));
    }
    let nfp = lp_norm(f, p)?.powf(p);
    if nfp == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let grid = *f.grid();
    let d = grid.dim();
    let mut g = match start {
        Some(g) => g.clone(),
        None => moment_init(f, p)?,
    };
    let mut asm = assemble(f, &g, p, true);
    let mut res = sup(&asm.residual) / nfp;
    let finish = |g: Gaussian, iterations: usize, res: f64, clamped: bool, converged: bool, message: String| -> Result<ProjectionResult> {
        let gs = sample(&g, &grid)?;
        let perp = f.sub(&gs)?;
        let dist_star = lp_norm(&perp, p)?;
        Ok(ProjectionResult { pi: g, perp, dist_star, converged, iterations, residual: res, clamped, message })
    };
    if res > BASIN_THRESHOLD {
        return finish(g, 0, res, asm.clamped, false, format!("initial relative residual {res:e} outside basin"));
    }
    for iter in 0..MAX_ITER {
        if res < CONVERGENCE_TOL {
            return finish(g, iter, res, asm.clamped, true, "converged".into());
        }
        let step = match asm.jacobian.clone().lu().solve(&(-&asm.residual)) {
            Some(s) => s,
            None => return finish(g, iter, res, asm.clamped, false, "singular Jacobian".into()),
        };
        let theta = DVector::from_vec(g.params.to_coords());
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-10 {
            let cand = &theta + &step * t;
            if let Ok(poly) = QuadraticPolynomial::from_coords(d, cand.as_slice()) {
                let cg = Gaussian::new(poly);
                let ca = assemble(f, &cg, p, true);
                let cr = sup(&ca.residual) / nfp;
                if cr.is_finite() && cr < res * (1.0 - 1e-4 * t) || (cr.is_finite() && cr < CONVERGENCE_TOL) {
                    accepted = Some((cg, ca, cr));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((cg, ca, cr)) => {
                g = cg;
                asm = ca;
                res = cr;
            }
            None => return finish(g, iter, res, asm.clamped, false, "line search stalled".into()),
        }
    }
    let converged = res < CONVERGENCE_TOL;
    finish(g, MAX_ITER, res, asm.clamped, converged, if converged { "converged" } else { "iteration limit" }.into())
}

/// Convenience: ‖f − g‖_p for a Gaussian g on f's grid.
pub fn distance_to(f: &SampledFunction, g: &Gaussian, p: f64) -> Result<f64> {
    let gs = sample(g, f.grid())?;
    Ok(lp_norm_pow(&f.sub(&gs)?, p).powf(1.0 / p))
}

/// Exact coordinates helper used by callers that need a grid-free check.
pub fn coords_distance(a: &Gaussian, b: &Gaussian) -> f64 {
    a.params.to_coords().iter().zip(b.params.to_coords()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
