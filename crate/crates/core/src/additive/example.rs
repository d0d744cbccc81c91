use super::{sumset, FiniteSet};
use crate::error::{Error, Result};
use crate::report::VerificationReport;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Distance to the nearest integer.
pub fn dist_to_integer(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Samples of the dilation search over λ ∈ [0, 1).
pub const DILATION_STEPS: usize = 1_000_000;

/// P = {kp : 0 ≤ k < q} and Q = {kq : 0 ≤ k < p} for coprime p, q: the union
/// has p+q−1 elements, the sumset pq, and any λ with ‖λx‖ < δ on P∪Q lies
/// within 2δ/(pq) of an integer.
pub fn example_pq(p: u64, q: u64, delta: f64) -> Result<VerificationReport> {
    if p < 2 || q < 2 || p == q || gcd(p, q) != 1 {
        return Err(Error::InvalidParameter(format!("({p}, {q}) must be distinct coprime integers ≥ 2")));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!("δ = {delta} outside (0, 1/2)")));
    }
    let (pi, qi) = (p as i64, q as i64);
    let big_p = FiniteSet::from_ints((0..qi).map(|k| k * pi));
    let big_q = FiniteSet::from_ints((0..pi).map(|k| k * qi));
    let union = FiniteSet::from_ints(big_p.ints()?.into_iter().chain(big_q.ints()?));
    let sum = sumset(&big_p, &big_q)?;
    let xs = union.ints()?;
    let mut admissible = 0usize;
    let mut worst = 0.0f64;
    let mut best_lambda = 0.0f64;
    for k in 0..DILATION_STEPS {
        let lambda = k as f64 / DILATION_STEPS as f64;
        if xs.iter().all(|&x| dist_to_integer(lambda * x as f64) < delta) {
            admissible += 1;
            let d = dist_to_integer(lambda);
            if d > worst {
                worst = d;
                best_lambda = lambda;
            }
        }
    }
    let bound = 2.0 * delta / (p * q) as f64;
    let pass = union.len() as u64 == p + q - 1 && sum.len() as u64 == p * q && worst <= bound;
    Ok(VerificationReport::new("example_pq", "additive/coprime-progressions")
        .param("p", p)
        .param("q", q)
        .param("delta", delta)
        .computed("union_size", union.len() as u64)
        .computed("sumset_size", sum.len() as u64)
        .computed("admissible_samples", admissible as u64)
        .computed("best_lambda", best_lambda)
        .computed("max_admissible_dist", worst)
        .reference("union_size", p + q - 1)
        .reference("sumset_size", p * q)
        .reference("dilation_bound", bound)
        .tolerance(0.0)
        .pass(pass))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_seven() {
        let r = example_pq(5, 7, 0.1).unwrap();
        assert_eq!(r.computed["union_size"], 11);
        assert_eq!(r.computed["sumset_size"], 35);
        assert!(r.computed["max_admissible_dist"].as_f64().unwrap() <= 0.2 / 35.0);
        assert!(r.pass);
    }

    #[test]
    fn two_three() {
        let r = example_pq(2, 3, 0.1).unwrap();
        assert_eq!(r.computed["union_size"], 4);
        assert_eq!(r.computed["sumset_size"], 6);
        assert!(r.pass);
    }

    #[test]
    fn rejects_non_coprime() {
        assert!(example_pq(4, 6, 0.1).is_err());
        assert!(example_pq(3, 3, 0.1).is_err());
        assert!(example_pq(1, 3, 0.1).is_err());
    }
}
