use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Write};

/// Largest sumset the enumerators will build.
pub const SUMSET_CAP: usize = 10_000_000;

/// Strictly sorted, distinct points of ℤ^d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    d: usize,
    points: Vec<Vec<i64>>,
}

impl FiniteSet {
    pub fn new(d: usize, points: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let set: BTreeSet<Vec<i64>> = points.into_iter().collect();
        if let Some(p) = set.iter().find(|p| p.len() != d) {
            return Err(Error::InvalidParameter(format!("point {p:?} is not in ℤ^{d}")));
        }
        Ok(Self { d, points: set.into_iter().collect() })
    }

    pub fn from_ints(values: impl IntoIterator<Item = i64>) -> Self {
        let set: BTreeSet<i64> = values.into_iter().collect();
        Self { d: 1, points: set.into_iter().map(|v| vec![v]).collect() }
    }

    pub fn interval(lo: i64, hi_exclusive: i64) -> Self {
        Self::from_ints(lo..hi_exclusive)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    /// Coordinates of a one-dimensional set.
    pub fn ints(&self) -> Result<Vec<i64>> {
        if self.d != 1 {
            return Err(Error::InvalidParameter("expected a subset of ℤ".into()));
        }
        Ok(self.points.iter().map(|p| p[0]).collect())
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        other.points.iter().all(|p| self.contains(p))
    }

    /// Newline-delimited points, coordinates separated by whitespace or commas.
    pub fn read<R: BufRead>(r: R) -> Result<Self> {
        let mut pts = Vec::new();
        let mut d = None;
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let p = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<i64>().map_err(|e| Error::Format(format!("bad integer {s:?}: {e}"))))
                .collect::<Result<Vec<i64>>>()?;
            if *d.get_or_insert(p.len()) != p.len() {
                return Err(Error::Format("points have differing dimensions".into()));
            }
            pts.push(p);
        }
        Self::new(d.unwrap_or(1), pts)
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        for p in &self.points {
            let line: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn check_pair(a: &FiniteSet, b: &FiniteSet) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("sets must be nonempty".into()));
    }
    if a.d != b.d {
        return Err(Error::InvalidParameter("sets live in different dimensions".into()));
    }
    Ok(())
}

fn combine(a: &FiniteSet, b: &FiniteSet, sign: i64) -> Result<FiniteSet> {
    combine_capped(a, b, sign, SUMSET_CAP)
}

fn combine_capped(a: &FiniteSet, b: &FiniteSet, sign: i64, cap: usize) -> Result<FiniteSet> {
    check_pair(a, b)?;
    let mut out = BTreeSet::new();
    for x in &a.points {
        for y in &b.points {
            out.insert(x.iter().zip(y).map(|(u, v)| u + sign * v).collect::<Vec<i64>>());
            if out.len() > cap {
                return Err(Error::TooLarge(format!("sumset exceeds {cap} elements")));
            }
        }
    }
    Ok(FiniteSet { d: a.d, points: out.into_iter().collect() })
}

/// A + B.
pub fn sumset(a: &FiniteSet, b: &FiniteSet) -> Result<FiniteSet> {
    combine(a, b, 1)
}

/// A − B.
pub fn difference_set(a: &FiniteSet, b: &FiniteSet) -> Result<FiniteSet> {
    combine(a, b, -1)
}

/// mA − nB with m + n ≥ 1.
pub fn msum(m: usize, a: &FiniteSet, n: usize, b: &FiniteSet) -> Result<FiniteSet> {
    check_pair(a, b)?;
    if m + n == 0 {
        return Err(Error::InvalidParameter("m + n must be positive".into()));
    }
    let zero = FiniteSet { d: a.d, points: vec![vec![0; a.d]] };
    let mut acc = zero;
    for _ in 0..m {
        acc = sumset(&acc, a)?;
    }
    for _ in 0..n {
        acc = difference_set(&acc, b)?;
    }
    Ok(acc)
}

/// Representation counts r_{A+B}(s).
pub fn representation_counts(a: &FiniteSet, b: &FiniteSet) -> Result<HashMap<Vec<i64>, u64>> {
    check_pair(a, b)?;
    let mut r = HashMap::new();
    for x in &a.points {
        for y in &b.points {
            *r.entry(x.iter().zip(y).map(|(u, v)| u + v).collect()).or_insert(0) += 1;
        }
    }
    Ok(r)
}

/// E(A, B) = #{(a, b, a', b') : a + b = a' + b'} = Σ_s r(s)².
pub fn additive_energy_discrete(a: &FiniteSet, b: &FiniteSet) -> Result<u64> {
    Ok(representation_counts(a, b)?.values().map(|r| r * r).sum())
}
