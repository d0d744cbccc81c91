use crate::error::{Error, Result};

/// Finite union of closed intervals in ℝ, stored merged and sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Overlapping or touching intervals are merged.
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.iter().any(|&(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
            return Err(Error::InvalidParameter("intervals need finite endpoints a < b".into()));
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// (1_A ∗ 1_B)(t).
    pub fn convolution_at(&self, other: &Self, t: f64) -> f64 {
        let mut s = 0.0;
        for &(a0, a1) in &self.intervals {
            for &(b0, b1) in &other.intervals {
                s += (a1.min(t - b0) - a0.max(t - b1)).max(0.0);
            }
        }
        s
    }
}

/// ‖1_A ∗ 1_B‖₂², integrating the piecewise-linear convolution exactly between
/// its breakpoints.
pub fn additive_energy_continuum(a: &IntervalUnion, b: &IntervalUnion) -> f64 {
    let mut breaks: Vec<f64> = Vec::new();
    for &(a0, a1) in &a.intervals {
        for &(b0, b1) in &b.intervals {
            breaks.extend([a0 + b0, a0 + b1, a1 + b0, a1 + b1]);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let values: Vec<f64> = breaks.iter().map(|&t| a.convolution_at(b, t)).collect();
    breaks
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, h)| (t[1] - t[0]) * (h[0] * h[0] + h[0] * h[1] + h[1] * h[1]) / 3.0)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn unit_intervals() {
        let a = IntervalUnion::new(vec![(0.0, 1.0)]).unwrap();
        assert!((additive_energy_continuum(&a, &a) - 2.0 / 3.0).abs() < 1e-12);
        let b = IntervalUnion::new(vec![(0.0, 2.0)]).unwrap();
        assert!((additive_energy_continuum(&a, &b) - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn merging() {
        let a = IntervalUnion::new(vec![(2.0, 3.0), (0.0, 1.0), (0.5, 1.5)]).unwrap();
        assert_eq!(a.intervals(), &[(0.0, 1.5), (2.0, 3.0)]);
        assert_eq!(a.measure(), 2.5);
        assert!(IntervalUnion::new(vec![(1.0, 1.0)]).is_err());
    }

    #[test]
    fn matches_riemann_sum() {
        let a = IntervalUnion::new(vec![(0.0, 0.5), (1.0, 1.75)]).unwrap();
        let b = IntervalUnion::new(vec![(-0.25, 0.25), (2.0, 2.5)]).unwrap();
        let n = 200_000;
        let (lo, hi) = (-1.0, 5.0);
        let dt = (hi - lo) / n as f64;
        let riemann: f64 = (0..n).map(|k| a.convolution_at(&b, lo + (k as f64 + 0.5) * dt).powi(2)).sum::<f64>() * dt;
        assert!((riemann - additive_energy_continuum(&a, &b)).abs() < 1e-8);
    }

    #[test]
    fn young_bound_on_random_unions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let random_union = |rng: &mut rand_chacha::ChaCha8Rng| {
            let k = rng.random_range(1..6);
            IntervalUnion::new(
                (0..k)
                    .map(|_| {
                        let a = rng.random_range(-10.0..10.0);
                        (a, a + rng.random_range(0.01..3.0))
                    })
                    .collect(),
            )
            .unwrap()
        };
        for _ in 0..1000 {
            let a = random_union(&mut rng);
            let b = random_union(&mut rng);
            let e = additive_energy_continuum(&a, &b);
            assert!(e <= (a.measure() * b.measure()).powf(1.5) * (1.0 + 1e-12));
            assert!(e > 0.0);
        }
    }
}
