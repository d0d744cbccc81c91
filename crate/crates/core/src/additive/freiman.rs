use super::{sumset, DiscreteMultiprogression, FiniteSet};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// Largest set accepted by the cover search.
pub const FREIMAN_MAX_SIZE: usize = 10_000;
/// Number of smallest positive differences tried as generators.
const GENERATOR_CANDIDATES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct FreimanCover {
    pub progression: DiscreteMultiprogression,
    /// σ(P)/|A|.
    pub ratio: f64,
    /// |A+A|/|A|.
    pub doubling: f64,
    /// No rank-2 cover was found and the interval hull is loose (σ/|A| > K).
    pub fallback: bool,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Covers A ⊂ ℤ with K-bounded doubling by a proper progression of rank ≤ 2
/// of least size: the arithmetic hull, or a two-generator block progression
/// with generators among the smallest differences of A.
pub fn freiman_cover(a: &FiniteSet, k: f64) -> Result<FreimanCover> {
    let xs = a.ints()?;
    if xs.is_empty() {
        return Err(Error::InvalidParameter("set must be nonempty".into()));
    }
    if xs.len() > FREIMAN_MAX_SIZE {
        return Err(Error::TooLarge(format!("|A| = {} exceeds {FREIMAN_MAX_SIZE}", xs.len())));
    }
    let doubling = sumset(a, a)?.len() as f64 / xs.len() as f64;
    if doubling > k {
        return Err(Error::Precondition(format!("|A+A|/|A| = {doubling} exceeds K = {k}")));
    }
    let lo = xs[0];
    let step = xs.iter().fold(0, |g, &x| gcd(g, x - lo)).max(1);
    let hull_len = ((xs[xs.len() - 1] - lo) / step + 1) as u64;
    let mut best = DiscreteMultiprogression::new(vec![lo], vec![vec![step]], vec![hull_len])?;
    let mut found_rank_two = false;

    let diffs: BTreeSet<i64> = xs.iter().flat_map(|&x| xs.iter().map(move |&y| x - y)).filter(|&d| d > 0).take(10 * GENERATOR_CANDIDATES).collect();
    let cands: Vec<i64> = diffs.into_iter().take(GENERATOR_CANDIDATES).collect();
    for (i, &v1) in cands.iter().enumerate() {
        for &v2 in &cands[i + 1..] {
            if let Some(p) = block_cover(&xs, v1, v2) {
                if p.size() < best.size() {
                    best = p;
                    found_rank_two = true;
                }
            }
        }
    }
    let ratio = best.size() as f64 / xs.len() as f64;
    Ok(FreimanCover { progression: best, ratio, doubling, fallback: !found_rank_two && ratio > k })
}

/// {a + n₁v₁ + n₂v₂} containing every x with (N₁−1)v₁ < v₂, so the
/// representation is unique and the progression proper.
fn block_cover(xs: &[i64], v1: i64, v2: i64) -> Option<DiscreteMultiprogression> {
    let lo = xs[0];
    let (mut n1_min, mut n1_max, mut n2_max) = (i64::MAX, 0i64, 0i64);
    for &x in xs {
        let r = x - lo;
        let n2 = r / v2;
        let rem = r - n2 * v2;
        if rem % v1 != 0 {
            return None;
        }
        let n1 = rem / v1;
        n1_min = n1_min.min(n1);
        n1_max = n1_max.max(n1);
        n2_max = n2_max.max(n2);
    }
    let big_n1 = n1_max - n1_min + 1;
    if (big_n1 - 1) * v1 >= v2 || big_n1 < 2 || n2_max < 1 {
        return None;
    }
    DiscreteMultiprogression::new(vec![lo + n1_min * v1], vec![vec![v1], vec![v2]], vec![big_n1 as u64, (n2_max + 1) as u64]).ok()
}
