use super::{additive_energy_discrete, representation_counts, sumset, FiniteSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BsgExtraction {
    pub a_prime: FiniteSet,
    pub b_prime: FiniteSet,
    pub energy: u64,
    pub sumset_size: usize,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Popular-sums extraction: join a ∈ A and b ∈ B when a+b has at least
/// |A|/(2K) representations and return the largest connected component.
pub fn bsg_extract(a: &FiniteSet, b: &FiniteSet, k: f64) -> Result<BsgExtraction> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("sets must be nonempty".into()));
    }
    let (na, nb) = (a.len(), b.len());
    if na.max(nb) as f64 > k * na.min(nb) as f64 {
        return Err(Error::Precondition(format!("sizes {na}, {nb} are not within a factor K = {k}")));
    }
    let energy = additive_energy_discrete(a, b)?;
    if (energy as f64) < (na as f64).powi(3) / k {
        return Err(Error::Precondition(format!("E(A,B) = {energy} is below |A|³/K")));
    }
    let counts = representation_counts(a, b)?;
    let threshold = na as f64 / (2.0 * k);
    let mut parent: Vec<usize> = (0..na + nb).collect();
    let mut touched = vec![false; na + nb];
    for (i, x) in a.points().iter().enumerate() {
        for (j, y) in b.points().iter().enumerate() {
            let s: Vec<i64> = x.iter().zip(y).map(|(u, v)| u + v).collect();
            if counts[&s] as f64 >= threshold {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, na + j));
                parent[ri.max(rj)] = ri.min(rj);
                touched[i] = true;
                touched[na + j] = true;
            }
        }
    }
    let mut sizes = vec![0usize; na + nb];
    for v in 0..na + nb {
        if touched[v] {
            let r = find(&mut parent, v);
            sizes[r] += 1;
        }
    }
    let root = (0..na + nb).max_by_key(|&r| (sizes[r], std::cmp::Reverse(r))).unwrap_or(0);
    let mut pa = Vec::new();
    let mut pb = Vec::new();
    for v in 0..na + nb {
        if touched[v] && find(&mut parent, v) == root {
            if v < na {
                pa.push(a.points()[v].clone());
            } else {
                pb.push(b.points()[v - na].clone());
            }
        }
    }
    let a_prime = FiniteSet::new(a.dim(), pa)?;
    let b_prime = FiniteSet::new(b.dim(), pb)?;
    let sumset_size = if a_prime.is_empty() || b_prime.is_empty() { 0 } else { sumset(&a_prime, &b_prime)?.len() };
    Ok(BsgExtraction { a_prime, b_prime, energy, sumset_size })
}
