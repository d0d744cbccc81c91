use crate::constants::ExponentPair;
use crate::error::{Error, Result};
use crate::grids::{fourier_transform, Grid, SampledFunction};
use num_complex::Complex64;
use serde::Serialize;

const GAUSS_8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

/// Cumulative integral of a sampled density, interpolated between nodes.
struct Cumulative {
    x0: f64,
    h: f64,
    rho: Vec<f64>,
    /// C at each node.
    nodes: Vec<f64>,
}

impl Cumulative {
    fn new(grid: &Grid, rho: Vec<f64>) -> Self {
        let (x0, h) = (grid.coord(0), grid.spacing());
        let mut nodes = vec![0.0; rho.len()];
        let mut c = Cumulative { x0, h, rho, nodes: Vec::new() };
        for j in 1..nodes.len() {
            nodes[j] = (nodes[j - 1] + c.partial(j - 1, 1.0)).max(nodes[j - 1]);
        }
        c.nodes = nodes;
        c
    }

    fn sample(&self, j: isize) -> f64 {
        usize::try_from(j).ok().and_then(|j| self.rho.get(j)).copied().unwrap_or(0.0)
    }

    /// ∫ over [x_j, x_j + s·h] of the degree-7 interpolant through nodes
    /// j−3..j+4, by 8-point Gauss–Legendre (exact for it).
    fn partial(&self, j: usize, s: f64) -> f64 {
        let j = j as isize;
        let y: Vec<f64> = (-3..=4).map(|k| self.sample(j + k)).collect();
        if y.iter().all(|&v| v == 0.0) {
            return 0.0;
        }
        let interp = |u: f64| -> f64 {
            (0..8)
                .map(|a| {
                    let xa = a as f64 - 3.0;
                    let w: f64 = (0..8).filter(|&b| b != a).map(|b| (u - (b as f64 - 3.0)) / (xa - (b as f64 - 3.0))).product();
                    w * y[a]
                })
                .sum()
        };
        let sum: f64 = GAUSS_8.iter().map(|&(t, w)| w * interp(0.5 * s * (t + 1.0))).sum();
        self.h * 0.5 * s * sum
    }

    fn last(&self) -> f64 {
        self.x0 + (self.rho.len() - 1) as f64 * self.h
    }

    fn total(&self) -> f64 {
        *self.nodes.last().unwrap_or(&0.0)
    }

    fn at(&self, x: f64) -> f64 {
        let u = ((x - self.x0) / self.h).clamp(0.0, (self.rho.len() - 1) as f64);
        let j = (u.floor() as usize).min(self.rho.len().saturating_sub(2));
        self.nodes[j] + self.partial(j, u - j as f64)
    }

    /// Least x with C(x) ≥ target, if any.
    fn inverse(&self, target: f64) -> Option<f64> {
        if target > self.total() {
            return None;
        }
        let j = self.nodes.partition_point(|&c| c < target);
        if j == 0 {
            return Some(self.x0);
        }
        let (mut lo, mut hi) = (self.x0 + (j - 1) as f64 * self.h, self.x0 + j as f64 * self.h);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.at(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(hi)
    }

    /// Length of the shortest interval holding `fraction` of the total.
    fn shortest(&self, fraction: f64) -> f64 {
        let need = fraction * self.total();
        let span = |a: f64| self.inverse(self.at(a) + need).map(|b| b - a);
        let mut best = (f64::INFINITY, self.x0);
        for j in 0..self.rho.len() {
            let a = self.x0 + j as f64 * self.h;
            match span(a) {
                Some(len) if len < best.0 => best = (len, a),
                Some(_) => {}
                None => break,
            }
        }
        // golden-section refinement of the left end around the best node
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let (mut lo, mut hi) = ((best.1 - self.h).max(self.x0), (best.1 + self.h).min(self.last()));
        let cost = |a: f64| span(a).unwrap_or(f64::INFINITY);
        let (mut c, mut d) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
        let (mut fc, mut fd) = (cost(c), cost(d));
        for _ in 0..80 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - phi * (hi - lo);
                fc = cost(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + phi * (hi - lo);
                fd = cost(d);
            }
        }
        best.0.min(fc).min(fd)
    }
}

/// Widening factor applied before the transform, refining the frequency grid.
pub const FREQUENCY_PADDING: usize = 4;

/// f on a grid `factor` times wider with the same spacing.
fn zero_pad(f: &SampledFunction, factor: usize) -> Result<SampledFunction> {
    let grid = f.grid();
    let n = grid.len();
    let wide = Grid::new(1, factor as f64 * grid.half_width(), factor * n)?;
    let mut values = vec![Complex64::new(0.0, 0.0); factor * n];
    let offset = (factor - 1) * n / 2;
    values[offset..offset + n].copy_from_slice(f.values());
    SampledFunction::new(wide, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyProduct {
    /// Shortest interval holding `mass` of ∫|f|^p.
    pub spatial: f64,
    /// Shortest interval holding `mass` of ∫|f̂|^q.
    pub frequency: f64,
    pub product: f64,
}

pub fn uncertainty_product(f: &SampledFunction, p: f64, mass: f64) -> Result<UncertaintyProduct> {
    let e = ExponentPair::new(p)?;
    if f.grid().dim() != 1 {
        return Err(Error::InvalidGrid("uncertainty product is one-dimensional".into()));
    }
    if !(mass > 0.0 && mass < 1.0) {
        return Err(Error::InvalidParameter(format!("mass fraction {mass} outside (0, 1)")));
    }
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let density = |g: &SampledFunction, s: f64| Cumulative::new(g.grid(), g.values().iter().map(|z| z.norm().powf(s)).collect());
    let spatial = density(f, e.p).shortest(mass);
    let frequency = density(&fourier_transform(&zero_pad(f, FREQUENCY_PADDING)?)?, e.q).shortest(mass);
    Ok(UncertaintyProduct { spatial, frequency, product: spatial * frequency })
}
