//! A small BFGS minimiser with Armijo backtracking.

#[derive(Debug, Clone, Copy)]
pub struct BfgsOptions {
    pub max_iter: usize,
    /// Stop when the sup-norm of the gradient falls below this.
    pub gtol: f64,
    /// Stop when the relative decrease over an iteration falls below this.
    pub ftol: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self { max_iter: 500, gtol: 1e-12, ftol: 1e-15 }
    }
}

#[derive(Debug, Clone)]
pub struct BfgsResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimises `f`, which returns the value and gradient, or `None` outside
/// its domain.
pub fn bfgs(f: impl Fn(&[f64]) -> Option<(f64, Vec<f64>)>, x0: &[f64], opts: BfgsOptions) -> Option<BfgsResult> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let (mut fx, mut gx) = f(&x)?;
    let mut h = vec![vec![0.0; n]; n];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut first = true;
    let mut stall = 0;
    for iter in 0..opts.max_iter {
        let gmax = gx.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if gmax < opts.gtol {
            return Some(BfgsResult { x, value: fx, iterations: iter, converged: true });
        }
        let mut dir: Vec<f64> = (0..n).map(|i| -dot(&h[i], &gx)).collect();
        let mut slope = dot(&dir, &gx);
        if slope >= 0.0 {
            // Lost descent; restart from steepest descent.
            for (i, row) in h.iter_mut().enumerate() {
                row.iter_mut().for_each(|v| *v = 0.0);
                row[i] = 1.0;
            }
            dir = gx.iter().map(|v| -v).collect();
            slope = dot(&dir, &gx);
            first = true;
        }
        if first {
            // Keep the first trial step modest.
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.1 {
                let s = 0.1 / norm;
                dir.iter_mut().for_each(|v| *v *= s);
                slope *= s;
            }
        }
        let mut t = 1.0;
        let mut next = None;
        for _ in 0..60 {
            let cand: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + t * di).collect();
            if let Some((fc, gc)) = f(&cand) {
                if fc.is_finite() && fc <= fx + 1e-4 * t * slope {
                    next = Some((cand, fc, gc));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((xn, fxn, gn)) = next else {
            return Some(BfgsResult { x, value: fx, iterations: iter, converged: false });
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&gx).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            if first {
                let scale = sy / dot(&y, &y);
                for (i, row) in h.iter_mut().enumerate() {
                    row.iter_mut().for_each(|v| *v = 0.0);
                    row[i] = scale;
                }
                first = false;
            }
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..n).map(|i| dot(&h[i], &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        let decrease = (fx - fxn) / fx.abs().max(1e-300);
        x = xn;
        fx = fxn;
        gx = gn;
        if decrease < opts.ftol {
            stall += 1;
            if stall >= 3 {
                return Some(BfgsResult { x, value: fx, iterations: iter + 1, converged: true });
            }
        } else {
            stall = 0;
        }
    }
    Some(BfgsResult { x, value: fx, iterations: opts.max_iter, converged: false })
}
