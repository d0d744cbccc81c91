use super::{default_window, indicator_pairing, level_decompose_base, power_lift, PowerLiftSummary};
use crate::additive::{bsg_extract, freiman_cover, sumset, DiscreteMultiprogression, FiniteSet};
use crate::constants::{babenko, hy_ratio};
use crate::error::{Error, Result};
use crate::grids::{lp_norm, SampledFunction};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub p: f64,
    pub eta: f64,
    /// hy_ratio(f)/A_p.
    pub normalized_ratio: f64,
    pub power_lift: PowerLiftSummary,
    /// Level base α = 2^{r/p}: the dyadic levels of |f|^{p/r}.
    pub base: f64,
    pub level: i32,
    /// Grid indices kept by the popular-sums step.
    pub extracted: Vec<i64>,
    /// Progression in grid indices.
    pub progression: DiscreteMultiprogression,
    pub fallback: bool,
    /// σ(P) = |P|·Δx.
    pub progression_measure: f64,
    /// ‖g‖_p/‖f‖_p.
    pub mass_fraction: f64,
    /// ‖g‖_∞ σ(P)^{1/p}/‖f‖_p.
    pub flatness: f64,
    /// α^k ≤ |g| ≤ α^{k+1} on the support of g.
    pub pinned: bool,
    #[serde(skip)]
    pub g: SampledFunction,
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Pipeline { stage: name.into(), reason: e.to_string() })
}

/// Single pass: power lift, level split, most energetic level, popular sums,
/// progression cover, and g = f restricted to the covered part of that level.
pub fn quasi_extremizer_extract(f: &SampledFunction, p: f64, eta: f64) -> Result<StructureReport> {
    let a_p = babenko(p)?;
    let ratio = hy_ratio(f, p)? / a_p;
    if ratio < eta {
        return Err(Error::Precondition(format!("hy_ratio/A_p = {ratio:.4} is below η = {eta}")));
    }
    let grid = *f.grid();
    let r = 0.5 * (1.0 + p);
    let lift = stage("power_lift", power_lift(f, p, r))?;
    let base = 2f64.powf(r / p);

    let (lo, hi) = stage("levels", default_window(f, base))?;
    let dec = stage("levels", level_decompose_base(f, base, lo, hi))?;
    let dx = grid.spacing();
    let mut best: Option<(f64, usize)> = None;
    for (i, level) in dec.levels.iter().enumerate() {
        let size = level.cells.len() as f64 * dx;
        let pairing = stage("levels", indicator_pairing(&level.cells, &level.cells, &level.cells, &grid))?;
        let score = base.powf(level.k as f64 * p) * size * pairing / (size * size);
        if best.is_none_or(|(s, _)| score > s) {
            best = Some((score, i));
        }
    }
    let level = &dec.levels[best.ok_or_else(|| Error::Pipeline { stage: "levels".into(), reason: "no levels".into() })?.1];

    // close the level at the top, α^k ≤ |f| ≤ α^{k+1}
    let top = base.powi(level.k + 1);
    let mut level_cells = level.cells.clone();
    level_cells.extend(f.values().iter().enumerate().filter(|(_, z)| z.norm() == top).map(|(j, _)| j));
    level_cells.sort_unstable();
    let cells = FiniteSet::from_ints(level_cells.iter().map(|&j| j as i64));
    let doubling = stage("bsg", sumset(&cells, &cells))?.len() as f64 / cells.len() as f64;
    let extracted = stage("bsg", bsg_extract(&cells, &cells, doubling))?.a_prime;
    let k_extracted = stage("freiman", sumset(&extracted, &extracted))?.len() as f64 / extracted.len() as f64;
    let cover = stage("freiman", freiman_cover(&extracted, k_extracted))?;
    let covered = stage("freiman", cover.progression.to_set())?;

    let zero = Complex64::new(0.0, 0.0);
    let mut values = vec![zero; grid.len()];
    for &j in &level_cells {
        if covered.contains(&[j as i64]) {
            values[j] = f.values()[j];
        }
    }
    let g = SampledFunction::new(grid, values)?;
    let norm_f = lp_norm(f, p)?;
    let measure = cover.progression.size() as f64 * dx;
    let (low, high) = (base.powi(level.k), base.powi(level.k + 1));
    let pinned = g.values().iter().filter(|z| z.norm() > 0.0).all(|z| (low..=high).contains(&z.norm()));
    Ok(StructureReport {
        p,
        eta,
        normalized_ratio: ratio,
        power_lift: PowerLiftSummary { r, t: lift.t, ratio: lift.ratio },
        base,
        level: level.k,
        extracted: stage("bsg", extracted.ints())?,
        progression: cover.progression,
        fallback: cover.fallback,
        progression_measure: measure,
        mass_fraction: lp_norm(&g, p)? / norm_f,
        flatness: g.sup_norm() * measure.powf(1.0 / p) / norm_f,
        pinned,
        g,
    })
}
