use crate::constants::YoungTriple;
use crate::error::{Error, Result};
use crate::grids::{lp_norm_pow, Grid, SampledFunction};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

/// Width of the default level window below the top level.
pub const LEVEL_WINDOW: i32 = 20;

/// Cells where base^k ≤ |f| < base^{k+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub k: i32,
    pub cells: Vec<usize>,
    /// |E_k|, from quadratic interpolation of log|f| inside each cell (d = 1)
    /// or from cell counting.
    pub measure: f64,
    /// F_k = f·1_{E_k}/base^k.
    pub factor: SampledFunction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelDecomposition {
    pub base: f64,
    pub levels: Vec<Level>,
    /// f restricted to the nonzero cells outside the window.
    pub tail: SampledFunction,
}

impl LevelDecomposition {
    pub fn level(&self, k: i32) -> Option<&Level> {
        self.levels.iter().find(|l| l.k == k)
    }

    /// Σ base^k F_k + tail.
    pub fn reconstruct(&self) -> Result<SampledFunction> {
        let mut out = self.tail.clone();
        for l in &self.levels {
            out = out.add(&l.factor.scale(Complex64::new(self.base.powi(l.k), 0.0)))?;
        }
        Ok(out)
    }

    pub fn tail_mass(&self, p: f64) -> f64 {
        lp_norm_pow(&self.tail, p)
    }

    /// Σ_k base^{kp}|E_k|.
    pub fn layer_mass(&self, p: f64) -> f64 {
        self.levels.iter().map(|l| self.base.powf(l.k as f64 * p) * l.measure).sum()
    }

    /// Σ_k base^{kp}·(cells in E_k)·Δx^d.
    pub fn layer_cell_mass(&self, k: i32, p: f64) -> f64 {
        self.level(k).map_or(0.0, |l| self.base.powf(k as f64 * p) * l.cells.len() as f64 * self.tail.grid().cell_volume())
    }
}

/// k with base^k ≤ v < base^{k+1}, for v > 0.
pub fn level_index(v: f64, base: f64) -> i32 {
    let mut k = (v.ln() / base.ln()).floor() as i32;
    while base.powi(k) > v {
        k -= 1;
    }
    while base.powi(k + 1) <= v {
        k += 1;
    }
    k
}

/// Top level of |f| and the window [top − LEVEL_WINDOW, top].
pub fn default_window(f: &SampledFunction, base: f64) -> Result<(i32, i32)> {
    let sup = f.sup_norm();
    if sup == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let top = level_index(sup, base);
    Ok((top - LEVEL_WINDOW, top))
}

/// Length of {u ∈ [lo, hi] : c0 + c1·u + c2·u² ≥ t}.
fn superlevel_length(c: [f64; 3], t: f64, lo: f64, hi: f64) -> f64 {
    let q = |u: f64| c[0] + c[1] * u + c[2] * u * u;
    let mut cuts = vec![lo, hi];
    let (a, b, cc) = (c[2], c[1], c[0] - t);
    if a.abs() < 1e-14 * (b.abs() + cc.abs()).max(1e-300) {
        if b != 0.0 {
            cuts.push(-cc / b);
        }
    } else {
        let disc = b * b - 4.0 * a * cc;
        if disc >= 0.0 {
            let s = -0.5 * (b + b.signum() * disc.sqrt());
            if s != 0.0 {
                cuts.push(s / a);
                cuts.push(cc / s);
            } else {
                cuts.push(0.0);
            }
        }
    }
    cuts.retain(|u| *u >= lo && *u <= hi);
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).filter(|w| q(0.5 * (w[0] + w[1])) >= t).map(|w| w[1] - w[0]).sum()
}

/// |{x : log_base|f(x)| ≥ t}| on a one-dimensional grid.
fn superlevel_measure(f: &SampledFunction, base: f64, t: f64) -> f64 {
    let grid = f.grid();
    let n = grid.len();
    let logs: Vec<f64> = f.values().iter().map(|z| z.norm().ln() / base.ln()).collect();
    let whole = |j: usize| if logs[j] >= t { 1.0 } else { 0.0 };
    let cells: f64 = (0..n)
        .map(|j| {
            if j == 0 || j + 1 == n {
                return whole(j);
            }
            let (ym, y0, yp) = (logs[j - 1], logs[j], logs[j + 1]);
            if !(ym.is_finite() && y0.is_finite() && yp.is_finite()) {
                return whole(j);
            }
            superlevel_length([y0, 0.5 * (yp - ym), 0.5 * (yp - 2.0 * y0 + ym)], t, -0.5, 0.5)
        })
        .sum();
    cells * grid.spacing()
}

/// Splits f by dyadic level |f| ∈ [2^k, 2^{k+1}) for k_min ≤ k ≤ k_max.
pub fn level_decompose(f: &SampledFunction, k_min: i32, k_max: i32) -> Result<LevelDecomposition> {
    level_decompose_base(f, 2.0, k_min, k_max)
}

/// As `level_decompose` with levels base^k ≤ |f| < base^{k+1}.
pub fn level_decompose_base(f: &SampledFunction, base: f64, k_min: i32, k_max: i32) -> Result<LevelDecomposition> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if !(base > 1.0) || k_min > k_max {
        return Err(Error::InvalidParameter(format!("base {base}, window [{k_min}, {k_max}]")));
    }
    let grid = *f.grid();
    let zero = Complex64::new(0.0, 0.0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); (k_max - k_min + 1) as usize];
    let mut tail = vec![zero; grid.len()];
    for (j, z) in f.values().iter().enumerate() {
        let a = z.norm();
        if a == 0.0 {
            continue;
        }
        let k = level_index(a, base);
        if (k_min..=k_max).contains(&k) {
            buckets[(k - k_min) as usize].push(j);
        } else {
            tail[j] = *z;
        }
    }
    let levels = buckets
        .into_iter()
        .enumerate()
        .filter(|(_, cells)| !cells.is_empty())
        .map(|(i, cells)| {
            let k = k_min + i as i32;
            let measure = if grid.dim() == 1 {
                superlevel_measure(f, base, k as f64) - superlevel_measure(f, base, (k + 1) as f64)
            } else {
                cells.len() as f64 * grid.cell_volume()
            };
            let scale = base.powi(-k);
            let mut values = vec![zero; grid.len()];
            for &j in &cells {
                values[j] = f.values()[j] * scale;
            }
            Ok(Level { k, cells, measure, factor: SampledFunction::new(grid, values)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LevelDecomposition { base, levels, tail: SampledFunction::new(grid, tail)? })
}

/// Cell counts of A + B on the index lattice, via zero-padded FFT.
fn sum_counts(a: &[usize], b: &[usize], n: usize) -> Vec<f64> {
    let len = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let spread = |cells: &[usize]| {
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        for &j in cells {
            v[j] = Complex64::new(1.0, 0.0);
        }
        fwd.process(&mut v);
        v
    };
    let (fa, fb) = (spread(a), spread(b));
    let mut prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    inv.process(&mut prod);
    prod.iter().map(|z| (z.re / len as f64).round()).collect()
}

/// ⟨1_A * 1_B, 1_C⟩ for sets of cells of a one-dimensional grid.
pub fn indicator_pairing(a: &[usize], b: &[usize], c: &[usize], grid: &Grid) -> Result<f64> {
    if grid.dim() != 1 {
        return Err(Error::InvalidGrid("level pairings are one-dimensional".into()));
    }
    let n = grid.len();
    if n % 2 != 0 {
        return Err(Error::InvalidGrid("odd number of points".into()));
    }
    // x_i + x_j = x_{i+j−N/2}
    let counts = sum_counts(a, b, n);
    let hits: f64 = c.iter().map(|&m| counts[m + n / 2]).sum();
    Ok(hits * grid.spacing().powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelTriple {
    pub k: [i32; 3],
    /// ⟨1_{E₁} * 1_{E₂}, 1_{E₃}⟩ / ∏|E_i|^{1/p_i}.
    pub score: f64,
}

/// Among levels carrying at least `floor` of each ‖f_i‖_{p_i}^{p_i}, the triple
/// with |k_i − k_j| ≤ LEVEL_WINDOW maximizing the normalized pairing.
pub fn select_level_triple(fs: [&SampledFunction; 3], triple: &YoungTriple, floor: f64) -> Result<LevelTriple> {
    let grid = *fs[0].grid();
    for f in &fs[1..] {
        fs[0].same_grid(f)?;
    }
    let mut candidates: Vec<Vec<(i32, Vec<usize>)>> = Vec::with_capacity(3);
    for (f, &p) in fs.iter().zip(&triple.p) {
        let (lo, hi) = default_window(f, 2.0)?;
        let dec = level_decompose(f, lo, hi)?;
        let total = lp_norm_pow(f, p);
        candidates.push(
            dec.levels
                .iter()
                .filter(|l| dec.layer_cell_mass(l.k, p) >= floor * total)
                .map(|l| (l.k, l.cells.clone()))
                .collect(),
        );
    }
    let dx = grid.spacing();
    let mut best: Option<LevelTriple> = None;
    for (k1, a) in &candidates[0] {
        for (k2, b) in &candidates[1] {
            if (k1 - k2).abs() > LEVEL_WINDOW {
                continue;
            }
            let counts = sum_counts(a, b, grid.len());
            for (k3, c) in &candidates[2] {
                if (k1 - k3).abs() > LEVEL_WINDOW || (k2 - k3).abs() > LEVEL_WINDOW {
                    continue;
                }
                let pairing = c.iter().map(|&m| counts[m + grid.len() / 2]).sum::<f64>() * dx * dx;
                let norm: f64 = [a.len(), b.len(), c.len()].iter().zip(&triple.p).map(|(&n, p)| (n as f64 * dx).powf(1.0 / p)).product();
                let score = pairing / norm;
                if best.is_none_or(|t| score > t.score) {
                    best = Some(LevelTriple { k: [*k1, *k2, *k3], score });
                }
            }
        }
    }
    match best {
        Some(t) if t.score >= floor => Ok(t),
        _ => Err(Error::Precondition("no popular triple".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn grid() -> Grid {
        Grid::new(1, 8.0, 1024).unwrap()
    }

    #[test]
    fn level_index_edges() {
        assert_eq!(level_index(1.0, 2.0), 0);
        assert_eq!(level_index(1.999, 2.0), 0);
        assert_eq!(level_index(2.0, 2.0), 1);
        assert_eq!(level_index(0.5, 2.0), -1);
        assert_eq!(level_index(0.4999, 2.0), -2);
    }

    #[test]
    fn indicator_is_one_level() {
        let f = SampledFunction::from_real_fn(grid(), |x| if (0.0..1.0).contains(&x[0]) { 1.0 } else { 0.0 });
        let dec = level_decompose(&f, -5, 5).unwrap();
        assert_eq!(dec.levels.len(), 1);
        assert_eq!(dec.levels[0].k, 0);
        assert!((dec.levels[0].cells.len() as f64 * grid().spacing() - 1.0).abs() < 1e-12);
        let g = SampledFunction::from_real_fn(grid(), |x| 1.0 + 0.9 * (x[0]).sin().abs());
        let dec = level_decompose(&g, -5, 5).unwrap();
        assert_eq!(dec.levels.iter().map(|l| l.k).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn gaussian_level_measures() {
        let f = SampledFunction::gaussian(grid());
        let dec = level_decompose(&f, -20, 0).unwrap();
        let r = |k: i32| (-(k as f64) * LN_2 / PI).sqrt();
        for k in -12..=-1 {
            let expected = 2.0 * (r(k) - r(k + 1));
            let got = dec.level(k).unwrap().measure;
            assert!((got - expected).abs() < 1e-6, "k={k}: {got} vs {expected}");
        }
    }

    #[test]
    fn reconstruction_and_layer_mass() {
        let f = SampledFunction::from_fn(grid(), |x| Complex64::from_polar((-PI * x[0] * x[0]).exp() * (1.0 + 0.3 * x[0]), x[0]));
        let (lo, hi) = default_window(&f, 2.0).unwrap();
        let dec = level_decompose(&f, lo, hi).unwrap();
        assert_eq!(dec.reconstruct().unwrap(), f);
        for p in [1.2, 1.5, 1.8] {
            let total = lp_norm_pow(&f, p);
            assert!(dec.tail_mass(p) < 1e-6 * total);
            let layer = dec.layer_mass(p);
            assert!(layer <= total * (1.0 + 1e-9) && layer >= 2f64.powf(-p) * total);
        }
    }

    #[test]
    fn pairing_of_intervals() {
        // [0,1] * [0,1] paired with [0,1]: ∫₀¹ min(x, 2 − x) dx = 1/2
        let g = grid();
        let cells: Vec<usize> = (0..g.len()).filter(|&j| (0.0..1.0).contains(&g.coord(j))).collect();
        let v = indicator_pairing(&cells, &cells, &cells, &g).unwrap();
        assert!((v - 0.5).abs() < 2.0 * g.spacing());
    }

    #[test]
    fn gaussian_triple_picks_the_bulk() {
        let f = SampledFunction::gaussian(grid());
        let t = YoungTriple::new([1.5; 3], 1).unwrap();
        let sel = select_level_triple([&f, &f, &f], &t, 0.05).unwrap();
        assert_eq!(sel.k, [-1, -1, -1]);
        assert!(sel.score > 0.7 && sel.score <= 1.0);
    }

    #[test]
    fn indicators_pick_level_zero() {
        let f = SampledFunction::from_real_fn(grid(), |x| if (0.0..1.0).contains(&x[0]) { 1.0 } else { 0.0 });
        let t = YoungTriple::new([1.5; 3], 1).unwrap();
        assert_eq!(select_level_triple([&f, &f, &f], &t, 0.05).unwrap().k, [0, 0, 0]);
    }

    #[test]
    fn two_scale_prefers_the_broad_part() {
        // one-cell spike of height 64^{1/p} next to a unit bump: equal L^p mass
        let p = 1.5;
        let h = 16.0; // 64^{1/p}
        let f1 = SampledFunction::from_real_fn(grid(), |x| {
            let spike = if (x[0] - 3.0).abs() < 1e-9 { h } else { 0.0 };
            spike + if (-0.5..0.5).contains(&x[0]) { 1.0 } else { 0.0 }
        });
        let dec = level_decompose(&f1, -5, 5).unwrap();
        assert!((dec.layer_cell_mass(4, p) - dec.layer_cell_mass(0, p)).abs() < 1e-12);
        let g = SampledFunction::from_real_fn(grid(), |x| if (-0.5..0.5).contains(&x[0]) { 1.0 } else { 0.0 });
        let t = YoungTriple::new([p; 3], 1).unwrap();
        let sel = select_level_triple([&f1, &g, &g], &t, 0.05).unwrap();
        assert_eq!(sel.k, [0, 0, 0]);
    }

    #[test]
    fn no_popular_triple() {
        let f = SampledFunction::gaussian(grid());
        let t = YoungTriple::new([1.5; 3], 1).unwrap();
        assert!(matches!(select_level_triple([&f, &f, &f], &t, 0.99), Err(Error::Precondition(_))));
    }
}
