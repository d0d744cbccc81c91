use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashSet;

/// Finitely supported function on ℤ^d.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFunction {
    d: usize,
    support: Vec<Vec<i64>>,
    values: Vec<Complex64>,
}

impl DiscreteFunction {
    pub fn new(d: usize, support: Vec<Vec<i64>>, values: Vec<Complex64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if support.len() != values.len() {
            return Err(Error::InvalidFunction("support and values differ in length".into()));
        }
        if support.iter().any(|n| n.len() != d) {
            return Err(Error::InvalidFunction(format!("support point of wrong dimension (d = {d})")));
        }
        let mut seen = HashSet::with_capacity(support.len());
        if !support.iter().all(|n| seen.insert(n.clone())) {
            return Err(Error::InvalidFunction("repeated support point".into()));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidFunction("non-finite value".into()));
        }
        Ok(Self { d, support, values })
    }

    /// One-dimensional function from (n, value) pairs.
    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Result<Self> {
        let (s, v) = pairs.iter().map(|&(n, z)| (vec![n], z)).unzip();
        Self::new(1, s, v)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn support(&self) -> &[Vec<i64>] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidExponent(format!("p = {p}")));
        }
        Ok(self.values.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p))
    }

    /// Largest coordinate spread of the support along any axis.
    pub fn diameter(&self) -> i64 {
        (0..self.d)
            .map(|k| {
                let it = self.support.iter().map(|n| n[k]);
                it.clone().max().unwrap_or(0) - it.min().unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }
}

/// Samples on θ_k = k/M ∈ [0,1)^d, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusFunction {
    d: usize,
    m: usize,
    values: Vec<Complex64>,
}

impl TorusFunction {
    pub fn new(d: usize, m: usize, values: Vec<Complex64>) -> Result<Self> {
        if m < 8 {
            return Err(Error::InvalidParameter(format!("torus resolution {m} below 8")));
        }
        if values.len() != m.pow(d as u32) {
            return Err(Error::InvalidFunction("value count is not M^d".into()));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidFunction("non-finite value".into()));
        }
        Ok(Self { d, m, values })
    }

    pub fn from_fn(d: usize, m: usize, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let total = m.pow(d as u32);
        let values = (0..total)
            .map(|i| {
                let theta: Vec<f64> = multi_index(i, m, d).iter().map(|&k| k as f64 / m as f64).collect();
                f(&theta)
            })
            .collect();
        Self::new(d, m, values)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn resolution(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

fn multi_index(mut i: usize, m: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; d];
    for slot in out.iter_mut().rev() {
        *slot = i % m;
        i /= m;
    }
    out
}

/// e^{−2πi k·n/M} with the phase reduced in integer arithmetic first.
fn torus_phase(k: &[usize], n: &[i64], m: usize) -> Complex64 {
    let m = m as i64;
    let r = k.iter().zip(n).map(|(&k, &n)| (k as i64 * n.rem_euclid(m)) % m).sum::<i64>() % m;
    Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * r as f64 / m as f64)
}

/// 𝔉f(θ) = Σ_n e^{−2πiθ·n} f(n) on the torus grid of resolution M.
pub fn discrete_fourier(f: &DiscreteFunction, m: usize) -> Result<TorusFunction> {
    let d = f.dim();
    let total = m.pow(d as u32);
    let values = (0..total)
        .map(|i| {
            let k = multi_index(i, m, d);
            f.support().iter().zip(f.values()).map(|(n, &v)| v * torus_phase(&k, n, m)).sum()
        })
        .collect();
    TorusFunction::new(d, m, values)
}

/// (M^{−d} Σ_k |g(θ_k)|^q)^{1/q}.
pub fn torus_lq_norm(g: &TorusFunction, q: f64) -> Result<f64> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::InvalidExponent(format!("q = {q}")));
    }
    let s: f64 = g.values().iter().map(|z| z.norm().powf(q)).sum();
    Ok((s / g.values().len() as f64).powf(1.0 / q))
}
