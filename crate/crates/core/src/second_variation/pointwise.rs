use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Threshold values of η over which the constants are calibrated.
pub const CALIBRATION_ETAS: [f64; 3] = [0.01, 0.1, 0.3];

/// Calibrated (c, C) for p ∈ {1.2, 1.5, 1.8}, reproduced by `calibrate`.
pub const CALIBRATED: [PointwiseConstants; 3] = [
    PointwiseConstants { p: 1.2, c: 0.05589237650095481, big_c: 0.38144586947784903 },
    PointwiseConstants { p: 1.5, c: 0.1793173588045023, big_c: 0.3154776619397728 },
    PointwiseConstants { p: 1.8, c: 0.35358895948430774, big_c: 0.16147587171978348 },
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseConstants {
    pub p: f64,
    /// Coefficient of the flat-branch gain η^{2−p}|t|^p.
    pub c: f64,
    /// Coefficient of the sharp-branch loss η t².
    pub big_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseCheck {
    pub holds: bool,
    pub margin: f64,
}

/// |1+z|^p − 1 − p·Re z, by series near the origin to avoid cancellation.
fn excess(z: Complex64, p: f64) -> f64 {
    let u = 2.0 * z.re + z.norm_sqr();
    if u.abs() > 1e-2 {
        return (Complex64::new(1.0, 0.0) + z).norm().powf(p) - 1.0 - p * z.re;
    }
    // ln(1+u) − u and e^w − 1 − w by their power series.
    let mut log_rem = 0.0;
    let mut term = u;
    for k in 2..40 {
        term *= -u;
        log_rem += term / k as f64;
    }
    let w = 0.5 * p * (u + log_rem);
    let mut exp_rem = 0.0;
    let mut term = w;
    for k in 2..40 {
        term *= w / k as f64;
        exp_rem += term;
    }
    // e^w − 1 − p Re z = (w − p Re z) + (e^w − 1 − w), with w − p Re z = (p/2)(|z|² + log_rem).
    0.5 * p * (z.norm_sqr() + log_rem) + exp_rem
}

fn quadratic(z: Complex64, p: f64) -> f64 {
    0.5 * p * (p - 1.0) * z.re * z.re + 0.5 * p * z.im * z.im
}

fn real_samples() -> Vec<f64> {
    let mut t: Vec<f64> = (0..=200_000).map(|k| -100.0 + k as f64 * 1e-3).collect();
    for k in 0..=600 {
        let r = 10f64.powf(-8.0 + k as f64 * 0.01);
        t.extend([r, -r, -1.0 + r, -1.0 - r]);
    }
    t
}

fn complex_samples() -> Vec<Complex64> {
    let mut z = Vec::new();
    for k in 0..=1000 {
        let r = 10f64.powf(-6.0 + k as f64 * 0.008);
        for j in 0..720 {
            z.push(Complex64::from_polar(r, j as f64 * std::f64::consts::PI / 360.0));
        }
    }
    for k in 0..=400 {
        let r = 10f64.powf(-6.0 + k as f64 * 0.015);
        for j in 0..360 {
            z.push(Complex64::new(-1.0, 0.0) + Complex64::from_polar(r, j as f64 * std::f64::consts::PI / 180.0));
        }
    }
    z
}

/// c = ½·inf of excess/(η^{2−p}|z|^p) over |z| > η and C = 2·sup of the
/// quadratic shortfall/(η|z|²) over 0 < |z| ≤ η, both over a fixed sweep of
/// real and complex arguments and every η in `etas`.
pub fn calibrate(p: f64, etas: &[f64]) -> Result<PointwiseConstants> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidExponent(format!("p = {p} outside (1, 2)")));
    }
    let mut zs: Vec<Complex64> = real_samples().into_iter().map(|t| Complex64::new(t, 0.0)).collect();
    zs.extend(complex_samples());
    let mut inf_ratio = f64::INFINITY;
    let mut sup_ratio: f64 = 0.0;
    for &eta in etas {
        for &z in &zs {
            let r = z.norm();
            if r == 0.0 {
                continue;
            }
            let e = excess(z, p);
            if r > eta {
                inf_ratio = inf_ratio.min(e / (eta.powf(2.0 - p) * r.powf(p)));
            } else {
                sup_ratio = sup_ratio.max((quadratic(z, p) - e) / (eta * r * r));
            }
        }
    }
    let consts = PointwiseConstants { p, c: 0.5 * inf_ratio, big_c: 2.0 * sup_ratio };
    if !(consts.c > 0.0 && consts.big_c > 0.0) {
        return Err(Error::InvalidParameter(format!("calibration at p = {p} did not give positive constants")));
    }
    Ok(consts)
}

fn cache() -> &'static Mutex<HashMap<(u64, u64), PointwiseConstants>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), PointwiseConstants>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Table entry when (p, η) is covered, otherwise a cached calibration over
/// the standard thresholds together with η.
pub fn constants_for(p: f64, eta: f64) -> Result<PointwiseConstants> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter(format!("η = {eta} outside (0, 1]")));
    }
    if CALIBRATION_ETAS.contains(&eta) {
        if let Some(k) = CALIBRATED.iter().find(|k| k.p == p) {
            return Ok(*k);
        }
    }
    let key = (p.to_bits(), eta.to_bits());
    if let Some(k) = cache().lock().expect("calibration cache poisoned").get(&key) {
        return Ok(*k);
    }
    let mut etas = CALIBRATION_ETAS.to_vec();
    if !etas.contains(&eta) {
        etas.push(eta);
    }
    let k = calibrate(p, &etas)?;
    cache().lock().expect("calibration cache poisoned").insert(key, k);
    Ok(k)
}

fn verdict(lhs: f64, rhs: f64) -> PointwiseCheck {
    let margin = lhs - rhs;
    PointwiseCheck { holds: margin >= -1e-12 * (1.0 + lhs.abs()), margin }
}

/// Two-branch lower bound for |1+z|^p against the given constants.
pub fn check_with(z: Complex64, eta: f64, k: &PointwiseConstants) -> PointwiseCheck {
    let p = k.p;
    let lhs = (Complex64::new(1.0, 0.0) + z).norm().powf(p);
    let r = z.norm();
    let rhs = if r <= eta {
        1.0 + p * z.re + quadratic(z, p) - k.big_c * eta * r * r
    } else {
        1.0 + p * z.re + k.c * eta.powf(2.0 - p) * r.powf(p)
    };
    verdict(lhs, rhs)
}

pub fn check_pointwise_real(t: f64, eta: f64, p: f64) -> Result<PointwiseCheck> {
    Ok(check_with(Complex64::new(t, 0.0), eta, &constants_for(p, eta)?))
}

pub fn check_pointwise_complex(z: Complex64, eta: f64, p: f64) -> Result<PointwiseCheck> {
    Ok(check_with(z, eta, &constants_for(p, eta)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub samples: usize,
    pub violations: usize,
    pub min_margin: f64,
}

/// Seeded sampling of t ∈ [−100, 100] (real) or |z| ≤ 100 (complex, uniform
/// in the disc) against the constants for (p, η).
pub fn pointwise_sweep(p: f64, eta: f64, samples: usize, complex: bool, seed: u64) -> Result<SweepSummary> {
    use rand::{Rng, SeedableRng};
    let k = constants_for(p, eta)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for i in 0..samples {
        // Every fourth draw concentrates near the origin where the branches meet.
        let scale = if i % 4 == 0 { 2.0 * eta } else { 100.0 };
        let z = if complex {
            let r = scale * rng.random::<f64>().sqrt();
            Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
        } else {
            Complex64::new(rng.random_range(-scale..scale), 0.0)
        };
        let c = check_with(z, eta, &k);
        if !c.holds {
            violations += 1;
        }
        min_margin = min_margin.min(c.margin);
    }
    Ok(SweepSummary { samples, violations, min_margin })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_reproduces() {
        let fresh: Vec<_> = CALIBRATED.iter().map(|k| calibrate(k.p, &CALIBRATION_ETAS).unwrap()).collect();
        for (k, fresh) in CALIBRATED.iter().zip(&fresh) {
            assert!((fresh.c - k.c).abs() <= 1e-12 * k.c);
            assert!((fresh.big_c - k.big_c).abs() <= 1e-12 * k.big_c);
        }
    }

    #[test]
    fn origin_is_equality() {
        let r = check_pointwise_real(0.0, 0.1, 1.5).unwrap();
        assert!(r.holds && r.margin == 0.0);
        let c = check_pointwise_complex(Complex64::new(0.0, 0.0), 0.1, 1.5).unwrap();
        assert!(c.holds && c.margin == 0.0);
    }

    #[test]
    fn antipode() {
        let k = PointwiseConstants { p: 1.5, c: 0.1, big_c: 1.0 };
        let r = check_with(Complex64::new(-1.0, 0.0), 0.1, &k);
        assert!(r.holds && r.margin > 0.0);
        assert!(check_pointwise_real(-1.0, 0.1, 1.5).unwrap().margin > 0.0);
    }

    #[test]
    fn imaginary_axis_loss_bounded() {
        let eta = 0.1;
        let k = constants_for(1.5, eta).unwrap();
        for j in 1..=100 {
            let y = eta * j as f64 / 100.0;
            let z = Complex64::new(0.0, y);
            let lhs = (Complex64::new(1.0, 0.0) + z).norm().powf(1.5);
            let margin = lhs - 1.0 - quadratic(z, 1.5);
            assert!(margin >= -k.big_c * eta * y * y);
        }
    }

    #[test]
    fn uncovered_exponent_calibrates() {
        let k = constants_for(1.33, 0.2).unwrap();
        assert!(k.c > 0.0 && k.big_c > 0.0);
        let s = pointwise_sweep(1.33, 0.2, 20_000, true, 1).unwrap();
        assert_eq!(s.violations, 0);
    }

    #[test]
    fn small_sweeps_clean() {
        for p in [1.2, 1.5, 1.8] {
            for eta in CALIBRATION_ETAS {
                for complex in [false, true] {
                    let s = pointwise_sweep(p, eta, 50_000, complex, 7).unwrap();
                    assert_eq!(s.violations, 0, "p={p} η={eta} complex={complex}");
                }
            }
        }
    }
}
