use crate::error::{Error, Result};
use nalgebra::DMatrix;
use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Monte Carlo points used for μ(E).
pub const MEASURE_SAMPLES: usize = 100_000;

/// Ellipsoid E = M(unit ball) in the space of d×d matrices, M acting on the
/// row-major d²-vector of entries.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixEllipsoid {
    pub d: usize,
    pub map: DMatrix<f64>,
}

impl MatrixEllipsoid {
    pub fn new(d: usize, map: DMatrix<f64>) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(Error::InvalidParameter(format!("d = {d} not in {{2, 3}}")));
        }
        if map.nrows() != d * d || map.ncols() != d * d {
            return Err(Error::InvalidParameter("ellipsoid map must be d²×d²".into()));
        }
        Ok(Self { d, map })
    }

    pub fn ball(d: usize, radius: f64) -> Result<Self> {
        Self::new(d, DMatrix::identity(d * d, d * d) * radius)
    }

    /// |det M|·vol(unit ball in ℝ^{d²}).
    pub fn exact_measure(&self) -> f64 {
        let n = (self.d * self.d) as f64;
        let unit = std::f64::consts::PI.powf(n / 2.0) / gamma_half_integer(n / 2.0 + 1.0);
        self.map.determinant().abs() * unit
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> DMatrix<f64> {
        let n = self.d * self.d;
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r = rng.random::<f64>().powf(1.0 / n as f64);
        let u = nalgebra::DVector::from_iterator(n, g.into_iter().map(|x| x * r / norm));
        let y = &self.map * u;
        DMatrix::from_row_slice(self.d, self.d, y.as_slice())
    }

    /// Monte Carlo μ(E) over the bounding box with a 95% half-width.
    pub fn estimate_measure<R: Rng>(&self, rng: &mut R, samples: usize) -> Result<(f64, f64)> {
        let n = self.d * self.d;
        let inv = self
            .map
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidParameter("ellipsoid map is singular".into()))?;
        let half: Vec<f64> = (0..n).map(|i| self.map.row(i).norm()).collect();
        let volume: f64 = half.iter().map(|h| 2.0 * h).product();
        let mut hits = 0usize;
        for _ in 0..samples {
            let y = nalgebra::DVector::from_iterator(n, half.iter().map(|&h| rng.random_range(-h..=h)));
            if (&inv * y).norm_squared() <= 1.0 {
                hits += 1;
            }
        }
        let f = hits as f64 / samples as f64;
        Ok((f * volume, 1.96 * (f * (1.0 - f) / samples as f64).sqrt() * volume))
    }
}

/// Γ(x) for x a positive integer or half-integer.
fn gamma_half_integer(x: f64) -> f64 {
    let mut acc = if (x - x.floor()).abs() > 0.25 { std::f64::consts::PI.sqrt() } else { 1.0 };
    let mut t = if (x - x.floor()).abs() > 0.25 { 0.5 } else { 1.0 };
    while t < x - 0.25 {
        acc *= t;
        t += 1.0;
    }
    acc
}

/// Matrices drawn from a convex symmetric set E together with μ(E).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSample {
    pub d: usize,
    pub matrices: Vec<DMatrix<f64>>,
    pub measure: f64,
    /// 95% half-width of the measure estimate (0 when exact).
    pub measure_ci: f64,
}

impl MatrixSample {
    pub fn new(d: usize, matrices: Vec<DMatrix<f64>>, measure: f64, measure_ci: f64) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(Error::InvalidParameter(format!("d = {d} not in {{2, 3}}")));
        }
        if matrices.len() < 100 {
            return Err(Error::InvalidParameter(format!("sample of {} matrices is below 100", matrices.len())));
        }
        if matrices.iter().any(|m| m.nrows() != d || m.ncols() != d || m.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidParameter("matrices must be finite and d×d".into()));
        }
        if !(measure >= 0.0 && measure.is_finite()) {
            return Err(Error::InvalidParameter(format!("measure {measure} must be finite and nonnegative")));
        }
        Ok(Self { d, matrices, measure, measure_ci })
    }

    /// `count` uniform draws from the ellipsoid with a Monte Carlo measure.
    pub fn from_ellipsoid<R: Rng>(e: &MatrixEllipsoid, count: usize, rng: &mut R) -> Result<Self> {
        let matrices = (0..count).map(|_| e.draw(rng)).collect();
        let (measure, ci) = e.estimate_measure(rng, MEASURE_SAMPLES)?;
        Self::new(e.d, matrices, measure, ci)
    }

    /// Every matrix multiplied by `factor`; the measure scales by factor^{d²}.
    pub fn scaled(&self, factor: f64) -> Self {
        let k = factor.abs().powi((self.d * self.d) as i32);
        Self {
            d: self.d,
            matrices: self.matrices.iter().map(|m| m * factor).collect(),
            measure: self.measure * k,
            measure_ci: self.measure_ci * k,
        }
    }
}

fn det(m: &DMatrix<f64>) -> f64 {
    match m.nrows() {
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)]) - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
        _ => m.determinant(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantSearch {
    pub indices: Vec<usize>,
    pub coefficients: Vec<i64>,
    pub combination: DMatrix<f64>,
    pub det: f64,
    /// |det| / μ(E)^{1/d}; NaN when μ(E) = 0.
    pub ratio: f64,
    /// μ(E) = 0 or no nonsingular combination was found.
    pub failed: bool,
}

/// Random trials before greedy refinement.
const TRIALS: usize = 4000;

fn combine(sample: &MatrixSample, idx: &[usize], s: &[i64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(sample.d, sample.d);
    for (&i, &c) in idx.iter().zip(s) {
        m += &sample.matrices[i] * c as f64;
    }
    m
}

/// Randomised then greedy search for Σ s_jT_j with Σs_j = 0, |s_j| ≤ C_max,
/// K ≤ K_max maximising |det|.
pub fn determinant_search<R: Rng>(sample: &MatrixSample, k_max: usize, c_max: i64, rng: &mut R) -> Result<DeterminantSearch> {
    if k_max < 2 || k_max > sample.matrices.len() {
        return Err(Error::InvalidParameter(format!("K_max = {k_max} must lie in [2, sample size]")));
    }
    if c_max < 1 {
        return Err(Error::InvalidParameter("C_max must be at least 1".into()));
    }
    let mut best: Option<(Vec<usize>, Vec<i64>, f64)> = None;
    for _ in 0..TRIALS {
        let k = rng.random_range(2..=k_max);
        let idx = index::sample(rng, sample.matrices.len(), k).into_vec();
        let mut s: Vec<i64> = (0..k - 1).map(|_| rng.random_range(-c_max..=c_max)).collect();
        let last = -s.iter().sum::<i64>();
        if last.abs() > c_max {
            continue;
        }
        s.push(last);
        if s.iter().all(|&c| c == 0) {
            continue;
        }
        let v = det(&combine(sample, &idx, &s)).abs();
        if best.as_ref().is_none_or(|b| v > b.2) {
            best = Some((idx, s, v));
        }
    }
    let (idx, mut s, mut value) = best.unwrap_or_else(|| (vec![0, 1], vec![1, -1], det(&combine(sample, &[0, 1], &[1, -1])).abs()));
    // Greedy transfers of one unit between coefficients keep Σs_j = 0.
    for _ in 0..200 {
        let mut improved = false;
        for i in 0..s.len() {
            for j in 0..s.len() {
                if i == j || s[i] + 1 > c_max || s[j] - 1 < -c_max {
                    continue;
                }
                s[i] += 1;
                s[j] -= 1;
                let v = det(&combine(sample, &idx, &s)).abs();
                if v > value {
                    value = v;
                    improved = true;
                } else {
                    s[i] -= 1;
                    s[j] += 1;
                }
            }
        }
        if !improved {
            break;
        }
    }
    let combination = combine(sample, &idx, &s);
    let det_value = det(&combination);
    let failed = sample.measure == 0.0 || det_value == 0.0;
    let root = match sample.d {
        2 => sample.measure.sqrt(),
        _ => sample.measure.cbrt(),
    };
    let ratio = if sample.measure > 0.0 { det_value.abs() / root } else { f64::NAN };
    Ok(DeterminantSearch { indices: idx, coefficients: s, combination, det: det_value, ratio, failed })
}
