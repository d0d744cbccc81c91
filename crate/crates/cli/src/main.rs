mod config;
mod output;
mod suites;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use config::{parse_list, read_config, Overrides, RunConfig, Suite};
use output::SuiteOutput;
use rayon::prelude::*;
use std::path::PathBuf;
use std::process::ExitCode;
use suites::UsageError;

#[derive(Parser)]
#[command(name = "hysharp", version, about = "Runs the hysharp verification suites and writes machine-readable reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite, or all of them, and write report.json plus CSV tables.
    Run(RunArgs),
}

/// Comma-separated numbers given as a single flag value.
#[derive(Clone, Debug)]
struct List(Vec<f64>);

fn list(s: &str) -> Result<List, String> {
    parse_list(s).map(List)
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Suite to run.
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    /// Config file with [suite], [grid] and [params] sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exponents in (1, 2), comma separated; fractions like 4/3 are accepted.
    #[arg(long, value_parser = list)]
    p: Option<List>,
    #[arg(long)]
    d: Option<usize>,
    /// Grid half-width L.
    #[arg(long)]
    grid_l: Option<f64>,
    /// Grid points per axis N.
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long, value_parser = list)]
    eta: Option<List>,
    #[arg(long, value_parser = list)]
    eps: Option<List>,
    #[arg(long)]
    rho: Option<f64>,
    /// Lift widths for the hybrid suite.
    #[arg(long, value_parser = list)]
    delta: Option<List>,
    /// Samples per cell for the pointwise suite.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides each suite's default tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            suite: self.suite,
            p: self.p.clone().map(|l| l.0),
            d: self.d,
            grid_l: self.grid_l,
            grid_n: self.grid_n,
            eta: self.eta.clone().map(|l| l.0),
            eps: self.eps.clone().map(|l| l.0),
            rho: self.rho,
            delta: self.delta.clone().map(|l| l.0),
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
            jobs: self.jobs,
            out: self.out.clone(),
        }
    }
}

fn resolve(args: &RunArgs) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => read_config(path)?,
        None => Overrides::default(),
    };
    let env_out = std::env::var_os("HYSHARP_OUT").filter(|s| !s.is_empty()).map(PathBuf::from);
    let cfg = RunConfig::resolve(file.merged(args.overrides()), env_out)?;
    suites::validate(&cfg, cfg.suite)?;
    Ok(cfg)
}

fn execute(cfg: &RunConfig) -> Result<SuiteOutput> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    let parts: Vec<Result<SuiteOutput, UsageError>> =
        pool.install(|| cfg.suite.expand().into_par_iter().map(|s| suites::run_suite(cfg, s)).collect());
    let mut merged = SuiteOutput::default();
    for part in parts {
        merged.extend(part?);
    }
    Ok(merged)
}

fn run(args: RunArgs) -> ExitCode {
    let started = std::time::SystemTime::now();
    let cfg = match resolve(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let out = match execute(&cfg) {
        Ok(out) => out,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    if let Err(e) = output::write_all(&cfg.out, &out, started) {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    let failed = out.reports.iter().filter(|r| !r.pass).count();
    for r in &out.reports {
        println!("{} {} [{}]", if r.pass { "PASS" } else { "FAIL" }, r.name, r.anchor);
    }
    println!("{} checks, {failed} failed; reports in {}", out.reports.len(), cfg.out.display());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run(args),
    }
}
