use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Constants,
    Spectrum,
    Pointwise,
    Projection,
    Sharpness,
    Additive,
    Hybrid,
    Extraction,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Constants,
        Suite::Spectrum,
        Suite::Pointwise,
        Suite::Projection,
        Suite::Sharpness,
        Suite::Additive,
        Suite::Hybrid,
        Suite::Extraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Constants => "constants",
            Suite::Spectrum => "spectrum",
            Suite::Pointwise => "pointwise",
            Suite::Projection => "projection",
            Suite::Sharpness => "sharpness",
            Suite::Additive => "additive",
            Suite::Hybrid => "hybrid",
            Suite::Extraction => "extraction",
            Suite::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Suite> {
        if self == Suite::All {
            Self::EACH.to_vec()
        } else {
            vec![self]
        }
    }
}

/// Values that may come from a config file or from flags; flags win.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub suite: Option<Suite>,
    pub p: Option<Vec<f64>>,
    pub d: Option<usize>,
    pub grid_l: Option<f64>,
    pub grid_n: Option<usize>,
    pub eta: Option<Vec<f64>>,
    pub eps: Option<Vec<f64>>,
    pub rho: Option<f64>,
    pub delta: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Fields set in `other` replace those in `self`.
    pub fn merged(self, other: Overrides) -> Overrides {
        Overrides {
            suite: other.suite.or(self.suite),
            p: other.p.or(self.p),
            d: other.d.or(self.d),
            grid_l: other.grid_l.or(self.grid_l),
            grid_n: other.grid_n.or(self.grid_n),
            eta: other.eta.or(self.eta),
            eps: other.eps.or(self.eps),
            rho: other.rho.or(self.rho),
            delta: other.delta.or(self.delta),
            samples: other.samples.or(self.samples),
            seed: other.seed.or(self.seed),
            tol: other.tol.or(self.tol),
            jobs: other.jobs.or(self.jobs),
            out: other.out.or(self.out),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub suite: Suite,
    /// Empty means each suite's own default exponents.
    pub p: Vec<f64>,
    pub d: usize,
    pub grid_l: Option<f64>,
    pub grid_n: Option<usize>,
    pub eta: Vec<f64>,
    pub eps: Option<Vec<f64>>,
    pub rho: f64,
    pub delta: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub jobs: usize,
    pub out: PathBuf,
}

pub const DEFAULT_OUT: &str = "hysharp-out";

impl RunConfig {
    pub fn resolve(o: Overrides, env_out: Option<PathBuf>) -> Result<Self> {
        let Some(suite) = o.suite else { bail!("no suite given (use --suite or a [suite] section)") };
        let cfg = RunConfig {
            suite,
            p: o.p.unwrap_or_default(),
            d: o.d.unwrap_or(1),
            grid_l: o.grid_l,
            grid_n: o.grid_n,
            eta: o.eta.unwrap_or_else(|| vec![0.01, 0.1, 0.3]),
            eps: o.eps,
            rho: o.rho.unwrap_or(0.4),
            delta: o.delta.unwrap_or_else(|| vec![0.2, 0.1, 0.05]),
            samples: o.samples.unwrap_or(1_000_000),
            seed: o.seed.unwrap_or(42),
            tol: o.tol,
            jobs: o.jobs.unwrap_or(1).max(1),
            out: o.out.or(env_out).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.p.iter().any(|&p| !(p > 1.0 && p < 2.0)) {
            bail!("every p must lie in (1, 2), got {:?}", self.p);
        }
        if self.d != 1 && self.d != 2 {
            bail!("d must be 1 or 2, got {}", self.d);
        }
        if let Some(l) = self.grid_l {
            if !(l > 0.0 && l.is_finite()) {
                bail!("grid half-width must be positive, got {l}");
            }
        }
        if let Some(n) = self.grid_n {
            if n < 8 {
                bail!("grid must have at least 8 points per axis, got {n}");
            }
        }
        if self.eta.iter().any(|&e| !(e > 0.0 && e <= 0.5)) {
            bail!("every η must lie in (0, 1/2], got {:?}", self.eta);
        }
        if let Some(eps) = &self.eps {
            if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
                bail!("every ε must lie in (0, 1), got {eps:?}");
            }
        }
        if !(self.rho > 0.0) {
            bail!("ρ must be positive, got {}", self.rho);
        }
        if self.delta.iter().any(|&d| !(d > 0.0 && d < 0.5)) {
            bail!("every δ must lie in (0, 1/2), got {:?}", self.delta);
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                bail!("tolerance must be positive, got {t}");
            }
        }
        if self.samples == 0 {
            bail!("samples must be positive");
        }
        Ok(())
    }

    pub fn exponents(&self, default: &[f64]) -> Vec<f64> {
        if self.p.is_empty() {
            default.to_vec()
        } else {
            self.p.clone()
        }
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t.split_once('/') {
                Some((a, b)) => {
                    let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| format!("bad number {t:?}"))?, b.trim().parse().map_err(|_| format!("bad number {t:?}"))?);
                    Ok(a / b)
                }
                None => t.parse().map_err(|_| format!("bad number {t:?}")),
            }
        })
        .collect()
}

/// Parses the flat key=value format with [suite], [grid] and [params] sections.
pub fn parse_config(text: &str) -> Result<Overrides> {
    let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !["suite", "grid", "params"].contains(&name.as_str()) {
                bail!("line {}: unknown section [{name}]", no + 1);
            }
            current = Some(name);
            continue;
        }
        let Some((k, v)) = line.split_once('=') else { bail!("line {}: expected key = value", no + 1) };
        let Some(section) = &current else { bail!("line {}: key outside any section", no + 1) };
        sections.entry(section.clone()).or_default().insert(k.trim().to_string(), v.trim().to_string());
    }

    let mut o = Overrides::default();
    let list = |v: &str| parse_list(v).map_err(anyhow::Error::msg);
    for (section, entries) in &sections {
        for (k, v) in entries {
            let ctx = || format!("[{section}] {k} = {v}");
            match (section.as_str(), k.as_str()) {
                ("suite", "name") => o.suite = Some(Suite::from_str(v, true).map_err(anyhow::Error::msg).with_context(ctx)?),
                ("grid", "d") => o.d = Some(v.parse().with_context(ctx)?),
                ("grid", "l") | ("grid", "L") => o.grid_l = Some(v.parse().with_context(ctx)?),
                ("grid", "n") | ("grid", "N") => o.grid_n = Some(v.parse().with_context(ctx)?),
                ("params", "p") => o.p = Some(list(v).with_context(ctx)?),
                ("params", "eta") => o.eta = Some(list(v).with_context(ctx)?),
                ("params", "eps") => o.eps = Some(list(v).with_context(ctx)?),
                ("params", "rho") => o.rho = Some(v.parse().with_context(ctx)?),
                ("params", "delta") => o.delta = Some(list(v).with_context(ctx)?),
                ("params", "samples") => o.samples = Some(v.parse().with_context(ctx)?),
                ("params", "seed") => o.seed = Some(v.parse().with_context(ctx)?),
                ("params", "tol") => o.tol = Some(v.parse().with_context(ctx)?),
                ("params", "jobs") => o.jobs = Some(v.parse().with_context(ctx)?),
                ("params", "out") => o.out = Some(PathBuf::from(v)),
                _ => bail!("unknown key {k:?} in [{section}]"),
            }
        }
    }
    Ok(o)
}

pub fn read_config(path: &Path) -> Result<Overrides> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let o = parse_config(
            "# sample\n[suite]\nname = sharpness\n[grid]\nd = 1\nL = 8\nN = 1024\n[params]\np = 3/2\neps = 0.1, 0.05,0.025\nrho = 0.4\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(o.suite, Some(Suite::Sharpness));
        assert_eq!(o.grid_n, Some(1024));
        assert_eq!(o.p, Some(vec![1.5]));
        assert_eq!(o.eps, Some(vec![0.1, 0.05, 0.025]));
        assert_eq!(o.seed, Some(7));
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(parse_config("[suite]\nname = nope\n").is_err());
        assert!(parse_config("[other]\nx = 1\n").is_err());
        assert!(parse_config("[params]\nwidth = 1\n").is_err());
        assert!(parse_config("p = 1.5\n").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = Overrides { seed: Some(1), rho: Some(0.3), ..Default::default() };
        let flags = Overrides { seed: Some(9), suite: Some(Suite::All), ..Default::default() };
        let cfg = RunConfig::resolve(file.merged(flags), Some(PathBuf::from("envdir"))).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.rho, 0.3);
        assert_eq!(cfg.out, PathBuf::from("envdir"));
    }

    #[test]
    fn validation() {
        let base = || Overrides { suite: Some(Suite::Constants), ..Default::default() };
        assert!(RunConfig::resolve(Overrides { p: Some(vec![2.5]), ..base() }, None).is_err());
        assert!(RunConfig::resolve(Overrides { d: Some(3), ..base() }, None).is_err());
        assert!(RunConfig::resolve(Overrides::default(), None).is_err());
        assert_eq!(RunConfig::resolve(base(), None).unwrap().out, PathBuf::from(DEFAULT_OUT));
    }
}
