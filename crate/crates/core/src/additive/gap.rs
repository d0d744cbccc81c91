use super::{dist_to_integer, ContinuumMultiprogression};
use crate::error::{Error, Result};

/// Largest number of breakpoints examined by the dilation sweep.
pub const GAP_BUDGET: usize = 10_000_000;

/// 𝒯(x) = λx + b mapping a progression into the δ-neighbourhood of ℤ.
#[derive(Debug, Clone, PartialEq)]
pub struct GapApproximation {
    pub lambda: f64,
    pub b: f64,
    /// |J(𝒯)| = |λ|.
    pub jacobian: f64,
    /// max ‖𝒯x‖_{ℝ/ℤ} over the rasterised progression.
    pub max_deviation: f64,
    /// |J(𝒯)| / δ^{r+1}.
    pub c_fit: f64,
    /// The sweep stopped at the budget; λ is the best found below the cap.
    pub budget_exhausted: bool,
}

/// Width of λ·P modulo ℤ after optimal centring: λs + Σ(N_i−1)‖λv_i‖.
fn spread(p: &ContinuumMultiprogression, lambda: f64) -> f64 {
    lambda * p.s + p.v.iter().zip(&p.n).map(|(v, &n)| (n - 1) as f64 * dist_to_integer(lambda * v[0])).sum::<f64>()
}

/// Offset b centring λ·P on ℤ.
fn centring(p: &ContinuumMultiprogression, lambda: f64) -> f64 {
    let mut lo = lambda * p.a[0];
    let mut hi = lo + lambda * p.s;
    for (v, &n) in p.v.iter().zip(&p.n) {
        let w = lambda * v[0];
        let eps = w - w.round();
        let reach = (n - 1) as f64 * eps;
        lo += reach.min(0.0);
        hi += reach.max(0.0);
    }
    -(lo + hi) / 2.0
}

/// max ‖λx + b‖_{ℝ/ℤ} over the lower corners of P with each cube sampled at 65 points.
pub fn affine_deviation(p: &ContinuumMultiprogression, lambda: f64, b: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for c in p.corners()? {
        for k in 0..=64 {
            let x = c[0] + p.s * k as f64 / 64.0;
            worst = worst.max(dist_to_integer(lambda * x + b));
        }
    }
    Ok(worst)
}

/// Largest λ > 0 whose centred image of P lies within δ of ℤ. The spread is
/// piecewise linear in λ with breaks at λ = m/(2|v_i|), so an exact descending
/// sweep over those breaks finds the supremum below 2δ/s.
pub fn gap_approximation(p: &ContinuumMultiprogression, delta: f64) -> Result<GapApproximation> {
    if p.dim() != 1 {
        return Err(Error::InvalidParameter("gap approximation is implemented for d = 1".into()));
    }
    if p.rank() > 3 {
        return Err(Error::InvalidParameter(format!("rank {} exceeds 3", p.rank())));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::InvalidParameter(format!("δ = {delta} outside (0, 1/2]")));
    }
    if (p.size() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("progression size {} is not normalised to 1", p.size())));
    }
    let target = 2.0 * delta * (1.0 - 1e-12);
    let mut lambda_max = 2.0 * delta / p.s;
    let slope: f64 = p.v.iter().map(|v| 2.0 * v[0].abs()).sum();
    let mut budget_exhausted = false;
    if slope * lambda_max > GAP_BUDGET as f64 {
        lambda_max = GAP_BUDGET as f64 / slope;
        budget_exhausted = true;
    }
    let mut breaks = vec![0.0, lambda_max];
    for v in &p.v {
        let w = 2.0 * v[0].abs();
        if w == 0.0 {
            continue;
        }
        let m_max = (lambda_max * w).floor() as u64;
        breaks.extend((1..=m_max).map(|m| m as f64 / w).filter(|&l| l < lambda_max));
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut lambda = 0.0;
    for w in breaks.windows(2).rev() {
        let (t0, t1) = (w[0], w[1]);
        let (g0, g1) = (spread(p, t0), spread(p, t1));
        if g1 < target {
            lambda = t1;
            break;
        }
        if g0 < target {
            lambda = t0 + (target - g0) / (g1 - g0) * (t1 - t0);
            while spread(p, lambda) >= target && lambda > t0 {
                lambda = t0 + (lambda - t0) * (1.0 - 1e-9);
            }
            break;
        }
    }
    let b = centring(p, lambda);
    let max_deviation = affine_deviation(p, lambda, b)?;
    Ok(GapApproximation {
        lambda,
        b,
        jacobian: lambda.abs(),
        max_deviation,
        c_fit: lambda.abs() / delta.powi(p.rank() as i32 + 1),
        budget_exhausted,
    })
}
