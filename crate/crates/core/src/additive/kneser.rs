use crate::error::{Error, Result};

/// Largest cyclic group handled.
pub const KNESER_MAX_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct KneserCover {
    /// N with ℤ_n ⊂ ∪ (t + NE − NE) over N or fewer translates.
    pub n_steps: usize,
    pub translates: Vec<usize>,
    /// Indicator of NE − NE.
    pub covering_set: Vec<bool>,
    /// Order of {h : h + (NE−NE) = NE−NE}.
    pub symmetry_order: usize,
}

fn add_sets(x: &[bool], y: &[bool]) -> Vec<bool> {
    let n = x.len();
    let ys: Vec<usize> = (0..n).filter(|&j| y[j]).collect();
    let mut out = vec![false; n];
    for i in (0..n).filter(|&i| x[i]) {
        for &j in &ys {
            out[(i + j) % n] = true;
        }
    }
    out
}

/// Translates chosen greedily at the first uncovered element; 0 ∈ S so each
/// choice covers it.
fn greedy_translates(s: &[bool]) -> Vec<usize> {
    let n = s.len();
    let members: Vec<usize> = (0..n).filter(|&j| s[j]).collect();
    let mut covered = vec![false; n];
    let mut out = Vec::new();
    while let Some(u) = covered.iter().position(|&c| !c) {
        out.push(u);
        for &m in &members {
            covered[(u + m) % n] = true;
        }
    }
    out
}

/// Whether the translates cover ℤ_n, checked element by element.
pub fn verify_cover(s: &[bool], translates: &[usize]) -> bool {
    let n = s.len();
    (0..n).all(|x| translates.iter().any(|&t| s[(x + n - t % n) % n]))
}

/// Smallest N for which N translates of NE − NE cover ℤ_n, building
/// NE − NE by repeated addition of E − E.
pub fn kneser_cover(e: &[usize], n: usize, alpha: f64) -> Result<KneserCover> {
    if n == 0 || n > KNESER_MAX_ORDER {
        return Err(Error::InvalidParameter(format!("group order {n} outside [1, {KNESER_MAX_ORDER}]")));
    }
    let mut ind = vec![false; n];
    for &x in e {
        if x >= n {
            return Err(Error::InvalidParameter(format!("element {x} outside ℤ_{n}")));
        }
        ind[x] = true;
    }
    let size = ind.iter().filter(|&&b| b).count();
    if size == 0 || (size as f64) < alpha * n as f64 {
        return Err(Error::Precondition(format!("#E = {size} below α·n = {}", alpha * n as f64)));
    }
    let neg: Vec<bool> = (0..n).map(|x| ind[(n - x) % n]).collect();
    let diff = add_sets(&ind, &neg);
    let mut s = diff.clone();
    let mut steps = 1;
    loop {
        let translates = greedy_translates(&s);
        if translates.len() <= steps {
            debug_assert!(verify_cover(&s, &translates));
            let symmetry_order = (0..n).filter(|&h| (0..n).all(|x| s[x] == s[(x + h) % n])).count();
            return Ok(KneserCover { n_steps: steps, translates, covering_set: s, symmetry_order });
        }
        s = add_sets(&s, &diff);
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn whole_group() {
        let e: Vec<usize> = (0..50).collect();
        let c = kneser_cover(&e, 50, 1.0).unwrap();
        assert_eq!(c.n_steps, 1);
        assert_eq!(c.translates.len(), 1);
    }

    #[test]
    fn index_two_subgroup() {
        let e: Vec<usize> = (0..100).step_by(2).collect();
        let c = kneser_cover(&e, 100, 0.5).unwrap();
        assert_eq!(c.translates.len(), 2);
        assert_eq!(c.symmetry_order, 50);
        assert!(verify_cover(&c.covering_set, &c.translates));
    }

    #[test]
    fn random_dense_subsets() {
        for seed in 0..20u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let e: Vec<usize> = (0..512).filter(|_| rng.random::<f64>() < 0.3).collect();
            let c = kneser_cover(&e, 512, 0.2).unwrap();
            assert!(c.n_steps <= 8);
            assert!(verify_cover(&c.covering_set, &c.translates));
        }
    }

    #[test]
    fn coset_of_small_subgroup() {
        // E inside a coset of the index-8 subgroup: 8 translates are unavoidable.
        let e: Vec<usize> = (0..64).map(|k| 3 + 8 * k).collect();
        let c = kneser_cover(&e, 512, 0.1).unwrap();
        assert_eq!(c.translates.len(), 8);
        assert_eq!(c.n_steps, 8);
        assert!(verify_cover(&c.covering_set, &c.translates));
        assert!(kneser_cover(&e, 512, 0.5).is_err());
    }
}
