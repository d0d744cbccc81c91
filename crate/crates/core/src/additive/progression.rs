use super::{FiniteSet, IntervalUnion};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Largest number of points enumerated from one progression.
const ENUMERATION_CAP: u64 = 10_000_000;

fn check_shape<T>(a: &[T], v: &[Vec<T>], n: &[u64]) -> Result<u64> {
    if a.is_empty() {
        return Err(Error::InvalidParameter("base point has no coordinates".into()));
    }
    if v.len() != n.len() {
        return Err(Error::InvalidParameter("one length per generator is required".into()));
    }
    if v.iter().any(|g| g.len() != a.len()) {
        return Err(Error::InvalidParameter("generator dimension differs from base point".into()));
    }
    if n.contains(&0) {
        return Err(Error::InvalidParameter("lengths must be at least 1".into()));
    }
    n.iter().try_fold(1u64, |acc, &k| acc.checked_mul(k)).ok_or_else(|| Error::Overflow("progression size overflows".into()))
}

/// Calls `f` with every index vector in ∏[0, N_i).
fn for_each_index(n: &[u64], mut f: impl FnMut(&[u64])) {
    let mut idx = vec![0u64; n.len()];
    loop {
        f(&idx);
        let mut k = 0;
        loop {
            if k == n.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < n[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// {a + Σ n_i v_i : 0 ≤ n_i < N_i} in ℤ^d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteMultiprogression {
    pub a: Vec<i64>,
    pub v: Vec<Vec<i64>>,
    #[serde(rename = "N")]
    pub n: Vec<u64>,
}

impl DiscreteMultiprogression {
    pub fn new(a: Vec<i64>, v: Vec<Vec<i64>>, n: Vec<u64>) -> Result<Self> {
        check_shape(&a, &v, &n)?;
        Ok(Self { a, v, n })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn rank(&self) -> usize {
        self.v.len()
    }

    /// σ = ∏N_i.
    pub fn size(&self) -> u64 {
        self.n.iter().product()
    }

    fn point(&self, idx: &[u64]) -> Vec<i64> {
        let mut p = self.a.clone();
        for (g, &k) in self.v.iter().zip(idx) {
            for (c, gc) in p.iter_mut().zip(g) {
                *c += k as i64 * gc;
            }
        }
        p
    }

    /// All points with multiplicity, in index order.
    pub fn enumerate(&self) -> Result<Vec<Vec<i64>>> {
        if self.size() > ENUMERATION_CAP {
            return Err(Error::TooLarge(format!("progression of size {} is too large to enumerate", self.size())));
        }
        let mut out = Vec::with_capacity(self.size() as usize);
        for_each_index(&self.n, |idx| out.push(self.point(idx)));
        Ok(out)
    }

    /// Injectivity of the enumeration map.
    pub fn is_proper(&self) -> Result<bool> {
        let pts = self.enumerate()?;
        let distinct: HashSet<&Vec<i64>> = pts.iter().collect();
        Ok(distinct.len() == pts.len())
    }

    pub fn to_set(&self) -> Result<FiniteSet> {
        FiniteSet::new(self.dim(), self.enumerate()?)
    }
}

/// {a + Σ n_i v_i : 0 ≤ n_i < N_i} + [0, s]^d in ℝ^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuumMultiprogression {
    pub a: Vec<f64>,
    pub v: Vec<Vec<f64>>,
    #[serde(rename = "N")]
    pub n: Vec<u64>,
    pub s: f64,
}

impl ContinuumMultiprogression {
    pub fn new(a: Vec<f64>, v: Vec<Vec<f64>>, n: Vec<u64>, s: f64) -> Result<Self> {
        check_shape(&a, &v, &n)?;
        if a.len() > 2 {
            return Err(Error::InvalidParameter("continuum progressions are supported for d ≤ 2".into()));
        }
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParameter(format!("cube side {s} must be positive")));
        }
        if a.iter().chain(v.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite base point or generator".into()));
        }
        Ok(Self { a, v, n, s })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn rank(&self) -> usize {
        self.v.len()
    }

    /// σ = s^d ∏N_i.
    pub fn size(&self) -> f64 {
        self.s.powi(self.dim() as i32) * self.n.iter().product::<u64>() as f64
    }

    /// Lower corners of the cubes, in index order.
    pub fn corners(&self) -> Result<Vec<Vec<f64>>> {
        let total: u64 = self.n.iter().product();
        if total > ENUMERATION_CAP {
            return Err(Error::TooLarge(format!("progression with {total} cubes is too large")));
        }
        let mut out = Vec::with_capacity(total as usize);
        for_each_index(&self.n, |idx| {
            let mut p = self.a.clone();
            for (g, &k) in self.v.iter().zip(idx) {
                for (c, gc) in p.iter_mut().zip(g) {
                    *c += k as f64 * gc;
                }
            }
            out.push(p);
        });
        Ok(out)
    }

    /// Lebesgue measure of the range: exact for d = 1, rasterised at 64 cells
    /// per cube side for d = 2.
    pub fn range_measure(&self) -> Result<f64> {
        let corners = self.corners()?;
        if self.dim() == 1 {
            let u = IntervalUnion::new(corners.iter().map(|c| (c[0], c[0] + self.s)).collect())?;
            return Ok(u.measure());
        }
        let h = self.s / 64.0;
        let mut cells = HashSet::new();
        for c in &corners {
            let i0 = (c[0] / h).round() as i64;
            let j0 = (c[1] / h).round() as i64;
            for i in 0..64 {
                for j in 0..64 {
                    cells.insert((i0 + i, j0 + j));
                }
            }
        }
        Ok(cells.len() as f64 * h * h)
    }

    /// Properness: the range has full measure σ, to within one raster cell per cube.
    pub fn is_proper(&self) -> Result<bool> {
        let m = self.range_measure()?;
        let tol = if self.dim() == 1 { 1e-12 * self.size() } else { (self.s / 64.0).powi(2) * self.corners()?.len() as f64 };
        Ok((self.size() - m).abs() <= tol.max(1e-300) && m <= self.size() + tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_size_and_properness() {
        let p = DiscreteMultiprogression::new(vec![0], vec![vec![1], vec![10]], vec![5, 5]).unwrap();
        assert_eq!(p.size(), 25);
        assert!(p.is_proper().unwrap());
        assert_eq!(p.to_set().unwrap().len(), 25);
        let q = DiscreteMultiprogression::new(vec![0], vec![vec![1], vec![3]], vec![5, 2]).unwrap();
        assert!(!q.is_proper().unwrap());
        assert!(DiscreteMultiprogression::new(vec![0], vec![vec![1]], vec![0]).is_err());
    }

    #[test]
    fn continuum_measure() {
        let p = ContinuumMultiprogression::new(vec![0.0], vec![vec![0.25]], vec![16], 1.0 / 16.0).unwrap();
        assert!((p.size() - 1.0).abs() < 1e-15);
        assert!((p.range_measure().unwrap() - 1.0).abs() < 1e-12);
        assert!(p.is_proper().unwrap());
        let overlapping = ContinuumMultiprogression::new(vec![0.0], vec![vec![0.5]], vec![4], 1.0).unwrap();
        assert!(overlapping.range_measure().unwrap() < overlapping.size());
        assert!(!overlapping.is_proper().unwrap());
    }

    #[test]
    fn continuum_two_dimensions() {
        let p = ContinuumMultiprogression::new(vec![0.0, 0.0], vec![vec![1.0, 0.0], vec![0.0, 2.0]], vec![3, 2], 0.5).unwrap();
        assert!((p.size() - 1.5).abs() < 1e-15);
        assert!(p.is_proper().unwrap());
        let q = ContinuumMultiprogression::new(vec![0.0, 0.0], vec![vec![0.25, 0.0]], vec![3], 0.5).unwrap();
        assert!(q.range_measure().unwrap() <= q.size());
        assert!(!q.is_proper().unwrap());
    }

    #[test]
    fn json_layout() {
        let p = ContinuumMultiprogression::new(vec![0.5], vec![vec![2.0]], vec![3], 0.25).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"a":[0.5],"v":[[2.0]],"N":[3],"s":0.25}"#);
        let back: ContinuumMultiprogression = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
