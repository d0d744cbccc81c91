use anyhow::{Context, Result};
use hysharp::VerificationReport;
use serde::Serialize;
use std::path::Path;

/// A plot-ready table. Cells are preformatted so that output is stable.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: impl Into<String>, header: &[&str]) -> Self {
        Self { file: file.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(&self.file);
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip representation, in exponent form for very small or
/// very large magnitudes.
pub fn f(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub reports: Vec<VerificationReport>,
    pub tables: Vec<Table>,
    /// Extra JSON artefacts keyed by file name.
    pub artefacts: Vec<(String, serde_json::Value)>,
}

impl SuiteOutput {
    pub fn extend(&mut self, other: SuiteOutput) {
        self.reports.extend(other.reports);
        self.tables.extend(other.tables);
        self.artefacts.extend(other.artefacts);
    }
}

#[derive(Serialize)]
struct Meta {
    started_unix: u64,
    finished_unix: u64,
    elapsed_seconds: f64,
    os: &'static str,
    arch: &'static str,
    host: String,
    version: &'static str,
    args: Vec<String>,
}

fn host_name() -> String {
    std::env::var("HOSTNAME")
        .ok()
        .or_else(|| std::fs::read_to_string("/etc/hostname").ok().map(|s| s.trim().to_string()))
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".into())
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_all(dir: &Path, out: &SuiteOutput, started: std::time::SystemTime) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write_json(&dir.join("report.json"), &out.reports)?;
    for t in &out.tables {
        t.write(dir)?;
    }
    for (name, v) in &out.artefacts {
        write_json(&dir.join(name), v)?;
    }
    let now = std::time::SystemTime::now();
    let unix = |t: std::time::SystemTime| t.duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = Meta {
        started_unix: unix(started),
        finished_unix: unix(now),
        elapsed_seconds: now.duration_since(started).map(|d| d.as_secs_f64()).unwrap_or(0.0),
        os: std::env::consts::OS,
        arch: std::env::consts::ARCH,
        host: host_name(),
        version: env!("CARGO_PKG_VERSION"),
        args: std::env::args().collect(),
    };
    write_json(&dir.join("meta.json"), &meta)
}
