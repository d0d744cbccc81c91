use crate::config::{RunConfig, Suite};
use crate::output::{f, SuiteOutput, Table};
use hysharp::additive::{
    additive_energy_continuum, additive_energy_discrete, determinant_search, example_pq, FiniteSet, IntervalUnion, MatrixEllipsoid,
    MatrixSample,
};
use hysharp::constants::{b_constant, babenko, hy_ratio, young_constant, young_trilinear, YoungTriple};
use hysharp::extraction::{quasi_extremizer_extract, uncertainty_product};
use hysharp::gaussian::{coords_distance, project, sample, Gaussian, QuadraticPolynomial};
use hysharp::grids::{fourier_at, lp_norm, lp_norm_pow, Grid, SampledFunction};
use hysharp::hybrid::{hybrid_fourier_at, hybrid_hy_ratio, lift, lift_near_extremizer_check, HybridFunction, DEFAULT_THETA_RESOLUTION};
use hysharp::second_variation::{
    deficit_ratio_on, eigenfunction, normal_direction, operator_apply, operator_spectrum, pointwise_sweep, predicted_spectrum,
    richardson,
};
use hysharp::{Complex64, VerificationReport};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;

/// Parameters a suite cannot run with; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

const P_WIDE: [f64; 4] = [1.2, 4.0 / 3.0, 1.5, 1.8];
const P_SWEEP: [f64; 3] = [1.2, 1.5, 1.8];
const P_ONE: [f64; 1] = [1.5];
const SHARPNESS_EPS: [f64; 3] = [0.1, 0.05, 0.025];
const PROJECTION_EPS: [f64; 3] = [0.01, 0.05, 0.1];
const SPECTRUM_ORDERS: usize = 6;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rng_for(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stream))
}

/// Grid from overrides, falling back to (L, N) per dimension.
fn grid(cfg: &RunConfig, d: usize, fallback: (f64, usize)) -> Result<Grid, UsageError> {
    let l = cfg.grid_l.unwrap_or(fallback.0);
    let n = cfg.grid_n.unwrap_or(fallback.1);
    Grid::new(d, l, n).map_err(|e| UsageError(format!("grid (d = {d}, L = {l}, N = {n}): {e}")))
}

fn one_dimensional(cfg: &RunConfig, suite: Suite) -> Result<(), UsageError> {
    if cfg.d != 1 {
        return usage(format!("suite {} runs in one dimension only (got d = {})", suite.name(), cfg.d));
    }
    Ok(())
}

/// Turns a library error inside a check into a failing report.
fn guarded(name: &str, anchor: &str, r: hysharp::Result<VerificationReport>) -> VerificationReport {
    r.unwrap_or_else(|e| VerificationReport::new(name, anchor).pass(false).note(format!("error: {e}")))
}

fn num(x: f64) -> serde_json::Value {
    VerificationReport::num(x)
}

/// Checks the suite's parameters before any work is done.
pub fn validate(cfg: &RunConfig, suite: Suite) -> Result<(), UsageError> {
    match suite {
        Suite::All => Suite::EACH.iter().try_for_each(|&s| validate(cfg, s)),
        Suite::Constants | Suite::Spectrum => grid(cfg, cfg.d, (8.0, 1024)).map(|_| ()),
        Suite::Sharpness => {
            one_dimensional(cfg, suite)?;
            let eps = cfg.eps.clone().unwrap_or(SHARPNESS_EPS.to_vec());
            if eps.len() != 3 || (eps[0] - 2.0 * eps[1]).abs() > 1e-12 * eps[0] || (eps[1] - 2.0 * eps[2]).abs() > 1e-12 * eps[1] {
                return usage(format!("sharpness needs three halving ε values (ε, ε/2, ε/4), got {eps:?}"));
            }
            grid(cfg, 1, (8.0, 1024)).map(|_| ())
        }
        _ => {
            one_dimensional(cfg, suite)?;
            grid(cfg, 1, (8.0, 1024)).map(|_| ())
        }
    }
}

pub fn run_suite(cfg: &RunConfig, suite: Suite) -> Result<SuiteOutput, UsageError> {
    validate(cfg, suite)?;
    Ok(match suite {
        Suite::Constants => constants(cfg)?,
        Suite::Spectrum => spectrum(cfg)?,
        Suite::Pointwise => pointwise(cfg),
        Suite::Projection => projection(cfg)?,
        Suite::Sharpness => sharpness(cfg)?,
        Suite::Additive => additive(cfg),
        Suite::Hybrid => hybrid(cfg)?,
        Suite::Extraction => extraction(cfg)?,
        Suite::All => unreachable!("expanded by the caller"),
    })
}

fn constants(cfg: &RunConfig) -> Result<SuiteOutput, UsageError> {
    let d = cfg.d;
    let g = grid(cfg, d, if d == 1 { (8.0, 1024) } else { (6.0, 256) })?;
    let tol = cfg.tol_or(if d == 1 { 1e-5 } else { 1e-4 });
    let mut out = SuiteOutput::default();
    let mut table = Table::new("constants.csv", &["p", "d", "babenko", "b_constant", "gaussian_ratio", "ratio_err", "norm_pow", "norm_pow_predicted"]);
    let gauss = SampledFunction::gaussian(g);
    for p in cfg.exponents(&P_WIDE) {
        let a = babenko(p).expect("p validated").powi(d as i32);
        let b = b_constant(p, d).expect("p validated");
        let ratio = hy_ratio(&gauss, p);
        let ratio_value = ratio.as_ref().copied().unwrap_or(f64::NAN);
        let err = (ratio_value - a).abs();
        out.reports.push(guarded(
            "gaussian_extremality",
            "hausdorff-young/gaussian-extremal",
            ratio.map(|r| {
                VerificationReport::new("gaussian_extremality", "hausdorff-young/gaussian-extremal")
                    .param("p", p)
                    .param("d", d)
                    .param("grid_n", g.points_per_axis())
                    .computed("ratio", num(r))
                    .reference("babenko_power_d", a)
                    .tolerance(tol)
                    .pass(err < tol)
            }),
        ));

        let norm_pow = lp_norm_pow(&gauss, p);
        let predicted = p.powf(-(d as f64) / 2.0);
        out.reports.push(
            VerificationReport::new("gaussian_norm", "gaussians/norm-identity")
                .param("p", p)
                .param("d", d)
                .computed("norm_pow", num(norm_pow))
                .reference("p_pow_minus_half_d", predicted)
                .tolerance(1e-8)
                .pass((norm_pow - predicted).abs() < 1e-8),
        );

        let phi = SampledFunction::from_real_fn(g, |x| (-PI * p / 2.0 * (x[0] * x[0] + x[1] * x[1])).exp());
        let lambda = (2.0 - p).powf(d as f64 / 2.0);
        out.reports.push(guarded(
            "fixed_eigenvector",
            "second-variation/fixed-eigenvector",
            operator_apply(&phi, p).and_then(|t| t.sub(&phi.scale(c(lambda)))).map(|r| {
                let res = r.sup_norm();
                VerificationReport::new("fixed_eigenvector", "second-variation/fixed-eigenvector")
                    .param("p", p)
                    .param("d", d)
                    .computed("sup_residual", num(res))
                    .reference("eigenvalue", lambda)
                    .tolerance(1e-8)
                    .pass(res < 1e-8)
            }),
        ));
        table.push(vec![f(p), d.to_string(), f(a), f(b), f(ratio_value), f(err), f(norm_pow), f(predicted)]);
    }
    if d == 1 {
        young_extremal(&g, &mut out);
    }
    out.tables.push(table);
    Ok(out)
}

fn young_extremal(g: &Grid, out: &mut SuiteOutput) {
    for (p1, p2) in [(1.5, 1.5), (1.5, 1.2), (1.8, 1.6), (4.0 / 3.0, 1.5)] {
        let r = (|| {
            let t = YoungTriple::new([p1, p2, 1.0 / (2.0 - 1.0 / p1 - 1.0 / p2)], 1)?;
            let fs = t.extremal_exponents().map(|s| SampledFunction::from_real_fn(*g, |x| (-PI * s * x[0] * x[0]).exp()));
            let v = young_trilinear(&fs[0], &fs[1], &fs[2], &t)?.norm();
            let bound = young_constant(&t)? * lp_norm(&fs[0], t.p[0])? * lp_norm(&fs[1], t.p[1])? * lp_norm(&fs[2], t.p[2])?;
            Ok(VerificationReport::new("young_extremal", "young/sharp-constant")
                .param("p", serde_json::json!(t.p))
                .computed("trilinear", num(v))
                .reference("bound", num(bound))
                .tolerance(1e-5)
                .pass((v - bound).abs() < 1e-5))
        })();
        out.reports.push(guarded("young_extremal", "young/sharp-constant", r));
    }
}

fn spectrum(cfg: &RunConfig) -> Result<SuiteOutput, UsageError> {
    let d = cfg.d;
    let g = grid(cfg, d, if d == 1 { (8.0, 1024) } else { (4.0, 32) })?;
    let tol = cfg.tol_or(if d == 1 { 1e-4 } else { 1e-2 });
    let mut out = SuiteOutput::default();
    for p in cfg.exponents(&P_ONE) {
        let mut table = Table::new(format!("spectrum_p{p:.4}_d{d}.csv"), &["k", "lambda_computed", "lambda_predicted", "rel_err"]);
        let predicted = predicted_spectrum(p, d, SPECTRUM_ORDERS);
        let report = operator_spectrum(p, SPECTRUM_ORDERS, &g).and_then(|spec| {
            let mut worst = 0.0f64;
            for (k, (a, b)) in spec.eigenvalues.iter().zip(&predicted).enumerate() {
                let rel = ((a - b) / b).abs();
                worst = worst.max(rel);
                table.push(vec![k.to_string(), f(*a), f(*b), f(rel)]);
            }
            let mut r = VerificationReport::new("operator_spectrum", "second-variation/hermite-spectrum")
                .param("p", p)
                .param("d", d)
                .param("grid_l", g.half_width())
                .param("grid_n", g.points_per_axis())
                .computed("eigenvalues", spec.eigenvalues.iter().map(|&x| num(x)).collect::<Vec<_>>())
                .computed("max_rel_err", num(worst))
                .reference("eigenvalues", predicted.clone())
                .tolerance(tol)
                .pass(worst < tol && spec.eigenvalues.len() == predicted.len());
            if let Some(w) = spec.warning {
                r = r.note(w);
            }
            if d == 1 {
                let mut residual = 0.0f64;
                for (k, &lambda) in predicted.iter().enumerate() {
                    let psi = eigenfunction(&[k], p, &g)?;
                    residual = residual.max(lp_norm(&operator_apply(&psi, p)?.sub(&psi.scale(c(lambda)))?, 2.0)?);
                }
                r.set_computed("max_eigenfunction_residual", num(residual));
                r.pass &= residual < 1e-6;
            }
            Ok(r)
        });
        out.reports.push(guarded("operator_spectrum", "second-variation/hermite-spectrum", report));
        out.tables.push(table);
    }
    Ok(out)
}

fn pointwise(cfg: &RunConfig) -> SuiteOutput {
    let cells: Vec<(f64, f64, bool)> = cfg
        .exponents(&P_SWEEP)
        .into_iter()
        .flat_map(|p| cfg.eta.iter().flat_map(move |&eta| [(p, eta, false), (p, eta, true)]))
        .collect();
    let results: Vec<_> = cells
        .par_iter()
        .enumerate()
        .map(|(i, &(p, eta, complex))| pointwise_sweep(p, eta, cfg.samples, complex, cfg.seed.wrapping_add(1000 + i as u64)))
        .collect();
    let mut out = SuiteOutput::default();
    let mut table = Table::new("pointwise.csv", &["p", "eta", "kind", "samples", "violations", "min_margin"]);
    for (&(p, eta, complex), r) in cells.iter().zip(results) {
        let kind = if complex { "complex" } else { "real" };
        let name = format!("pointwise_{kind}");
        out.reports.push(guarded(
            &name,
            "second-variation/pointwise",
            r.map(|s| {
                table.push(vec![f(p), f(eta), kind.into(), s.samples.to_string(), s.violations.to_string(), f(s.min_margin)]);
                VerificationReport::new(name.as_str(), "second-variation/pointwise")
                    .param("p", p)
                    .param("eta", eta)
                    .param("samples", s.samples)
                    .computed("violations", s.violations)
                    .computed("min_margin", num(s.min_margin))
                    .reference("violations", 0)
                    .pass(s.violations == 0)
            }),
        ));
    }
    out.tables.push(table);
    out
}

fn projection(cfg: &RunConfig) -> Result<SuiteOutput, UsageError> {
    let g = grid(cfg, 1, (8.0, 1024))?;
    let tol = cfg.tol_or(1e-8);
    let eps_list = cfg.eps.clone().unwrap_or(PROJECTION_EPS.to_vec());
    let mut out = SuiteOutput::default();
    let mut table = Table::new("projection.csv", &["p", "eps", "dist_star", "predicted", "abs_err"]);
    for (pi, p) in cfg.exponents(&P_ONE).into_iter().enumerate() {
        let mut rng = rng_for(cfg, 8 + pi as u64);
        let targets: Vec<Gaussian> = (0..100)
            .map(|_| {
                let poly = QuadraticPolynomial::new(
                    DMatrix::from_element(1, 1, rng.random_range(0.5..4.0)),
                    vec![Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-3.0..3.0))],
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-3.0..3.0)),
                )
                .expect("positive definite by construction");
                Gaussian::new(poly)
            })
            .collect();
        let errs: Vec<f64> = targets
            .par_iter()
            .map(|t| match sample(t, &g).and_then(|s| project(&s, p)) {
                Ok(r) if r.converged => coords_distance(&r.pi, t),
                _ => f64::INFINITY,
            })
            .collect();
        let worst = errs.iter().cloned().fold(0.0, f64::max);
        let failures = errs.iter().filter(|e| !e.is_finite()).count();
        out.reports.push(
            VerificationReport::new("projection_recovery", "gaussians/projection")
                .param("p", p)
                .param("trials", targets.len())
                .computed("max_parameter_error", num(worst))
                .computed("non_converged", failures)
                .tolerance(tol)
                .pass(worst < tol),
        );

        let r = (|| {
            let psi = normal_direction(&[3], p, &g)?;
            let psi_norm = lp_norm(&psi, p)?;
            let mut dist_err = 0.0f64;
            for &eps in &eps_list {
                let r = project(&SampledFunction::gaussian(g).add(&psi.scale(c(eps)))?, p)?;
                let predicted = eps * psi_norm;
                let e = (r.dist_star - predicted).abs();
                dist_err = dist_err.max(e);
                table.push(vec![f(p), f(eps), f(r.dist_star), f(predicted), f(e)]);
            }
            Ok(VerificationReport::new("projection_distance", "gaussians/normal-distance")
                .param("p", p)
                .param("eps", eps_list.clone())
                .computed("max_abs_err", num(dist_err))
                .tolerance(1e-5)
                .pass(dist_err < 1e-5))
        })();
        out.reports.push(guarded("projection_distance", "gaussians/normal-distance", r));
    }
    out.tables.push(table);
    Ok(out)
}

fn sharpness(cfg: &RunConfig) -> Result<SuiteOutput, UsageError> {
    let g = grid(cfg, 1, (8.0, 1024))?;
    let tol = cfg.tol_or(0.05);
    let eps = cfg.eps.clone().unwrap_or(SHARPNESS_EPS.to_vec());
    let mut out = SuiteOutput::default();
    let mut table = Table::new("sharpness.csv", &["p", "eps", "rho", "deficit", "normalized", "unnormalized"]);
    let mut fits = Table::new("sharpness_fit.csv", &["p", "rho", "limit", "order", "converged", "b_constant", "rel_err"]);
    for p in cfg.exponents(&P_ONE) {
        let ratios: Vec<_> = eps.par_iter().map(|&e| deficit_ratio_on(e, cfg.rho, p, &g)).collect();
        let r = (|| {
            let mut values = [0.0; 3];
            for ((v, r), &e) in values.iter_mut().zip(ratios).zip(&eps) {
                let r = r?;
                table.push(vec![f(p), f(e), f(cfg.rho), f(r.deficit), f(r.normalized), f(r.unnormalized)]);
                *v = r.normalized;
            }
            let fit = richardson(values);
            let b = b_constant(p, 1)?;
            let rel = ((fit.limit - b) / b).abs();
            fits.push(vec![f(p), f(cfg.rho), f(fit.limit), f(fit.order), fit.converged.to_string(), f(b), f(rel)]);
            Ok(VerificationReport::new("sharpness", "second-variation/sharpness")
                .param("p", p)
                .param("rho", cfg.rho)
                .param("eps", eps.clone())
                .param("grid_n", g.points_per_axis())
                .computed("normalized_ratios", values.iter().map(|&x| num(x)).collect::<Vec<_>>())
                .computed("extrapolated", num(fit.limit))
                .computed("order", num(fit.order))
                .computed("converged", fit.converged)
                .computed("rel_err", num(rel))
                .reference("b_constant", b)
                .tolerance(tol)
                .pass(rel < tol))
        })();
        out.reports.push(guarded("sharpness", "second-variation/sharpness", r));
    }
    out.tables.push(table);
    out.tables.push(fits);
    Ok(out)
}

fn additive(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    for (p, q) in [(2, 3), (5, 7), (4, 9)] {
        out.reports.push(guarded("example_pq", "additive/coprime-progressions", example_pq(p, q, 0.01)));
    }

    let pair = FiniteSet::from_ints([0, 1]);
    let r = additive_energy_discrete(&pair, &pair).map(|e| {
        VerificationReport::new("energy_discrete", "additive/energy")
            .param("set", vec![0, 1])
            .computed("energy", e)
            .reference("energy", 6)
            .pass(e == 6)
    });
    out.reports.push(guarded("energy_discrete", "additive/energy", r));
    let r = IntervalUnion::new(vec![(0.0, 1.0)]).map(|unit| {
        let e = additive_energy_continuum(&unit, &unit);
        VerificationReport::new("energy_continuum", "additive/energy")
            .param("set", "[0,1]")
            .computed("energy", num(e))
            .reference("energy", 2.0 / 3.0)
            .tolerance(1e-12)
            .pass((e - 2.0 / 3.0).abs() < 1e-12)
    });
    out.reports.push(guarded("energy_continuum", "additive/energy", r));

    let mut rng = rng_for(cfg, 9);
    let mut table = Table::new("additive_energy.csv", &["trial", "measure_a", "measure_b", "energy", "bound"]);
    let mut violations = 0;
    let trials = 1000;
    for trial in 0..trials {
        let mut union = || {
            let k = rng.random_range(1..=5);
            let iv = (0..k)
                .map(|_| {
                    let lo: f64 = rng.random_range(-10.0..10.0);
                    (lo, lo + rng.random_range(0.01..3.0))
                })
                .collect();
            IntervalUnion::new(iv).expect("intervals are nonempty")
        };
        let (a, b) = (union(), union());
        let e = additive_energy_continuum(&a, &b);
        let bound = (a.measure() * b.measure()).powf(1.5);
        if e > bound * (1.0 + 1e-12) {
            violations += 1;
        }
        table.push(vec![trial.to_string(), f(a.measure()), f(b.measure()), f(e), f(bound)]);
    }
    out.reports.push(
        VerificationReport::new("energy_bound", "additive/energy-bound")
            .param("trials", trials)
            .computed("violations", violations)
            .reference("violations", 0)
            .pass(violations == 0),
    );
    out.tables.push(table);

    let mut det_table = Table::new("determinant.csv", &["trial", "det", "ratio", "coefficients"]);
    let runs: Vec<_> = (0..20u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_for(cfg, 100 + trial);
            let map = DMatrix::from_fn(4, 4, |i, j| if i == j { rng.random_range(0.5..1.5) } else { rng.random_range(-0.3..0.3) });
            let e = MatrixEllipsoid::new(2, map)?;
            let draws = (0..100).map(|_| e.draw(&mut rng)).collect();
            let s = MatrixSample::new(2, draws, e.exact_measure(), 0.0)?;
            determinant_search(&s, 4, 8, &mut rng)
        })
        .collect();
    let mut ok = true;
    let mut c_fit = f64::INFINITY;
    let mut errors = Vec::new();
    for (trial, r) in runs.into_iter().enumerate() {
        match r {
            Ok(r) => {
                ok &= !r.failed && r.coefficients.iter().sum::<i64>() == 0 && r.coefficients.iter().all(|c| c.abs() <= 8);
                c_fit = c_fit.min(r.ratio);
                let coeffs = r.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
                det_table.push(vec![trial.to_string(), f(r.det), f(r.ratio), coeffs]);
            }
            Err(e) => {
                ok = false;
                errors.push(format!("trial {trial}: {e}"));
            }
        }
    }
    let mut r = VerificationReport::new("determinant_search", "additive/large-determinant")
        .param("trials", 20)
        .param("k_max", 4)
        .param("c_max", 8)
        .computed("c_fit", num(c_fit))
        .computed("constraints_hold", ok)
        .pass(ok && c_fit > 0.0);
    for e in errors {
        r = r.note(e);
    }
    out.reports.push(r);
    out.tables.push(det_table);
    out
}

fn bumps(g: Grid, delta: f64, coeffs: &[(i64, f64)]) -> SampledFunction {
    SampledFunction::from_real_fn(g, |x| {
        coeffs
            .iter()
            .map(|&(n, cf)| {
                let u = (x[0] - n as f64) / (0.8 * delta);
                if u.abs() < 1.0 {
                    cf * (-1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            })
            .sum()
    })
}

fn hybrid(cfg: &RunConfig) -> Result<SuiteOutput, UsageError> {
    let g = grid(cfg, 1, (8.0, 1024))?;
    let tol = cfg.tol_or(1e-4);
    let mut out = SuiteOutput::default();
    let mut table = Table::new("hybrid_lift.csv", &["p", "delta", "ratio_f", "ratio_lift", "gap", "floor"]);
    let exps = cfg.exponents(&P_WIDE);
    for p in &exps {
        let p = *p;
        let r = (|| {
            let a = babenko(p)?;
            let mut worst = 0.0f64;
            for n0 in [0, 3] {
                let fh = HybridFunction::single(4, n0, SampledFunction::gaussian(g))?;
                worst = worst.max((hybrid_hy_ratio(&fh, p, DEFAULT_THETA_RESOLUTION)? - a).abs());
            }
            Ok(VerificationReport::new("hybrid_single_slice", "hybrid/single-slice")
                .param("p", p)
                .computed("max_abs_err", num(worst))
                .reference("babenko", a)
                .tolerance(1e-5)
                .pass(worst < 1e-5))
        })();
        out.reports.push(guarded("hybrid_single_slice", "hybrid/single-slice", r));
    }

    let small = Grid::new(1, 4.0, 128).expect("fixed grid");
    for (i, &p) in exps.iter().enumerate() {
        let mut rng = rng_for(cfg, 10 + i as u64);
        let corpus: Vec<HybridFunction> = (0..20)
            .map(|_| {
                let width: f64 = rng.random_range(0.3..2.0);
                let phase: f64 = rng.random_range(-2.0..2.0);
                let coeffs: Vec<Complex64> = (0..7).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
                HybridFunction::from_fn(3, small, |n, x| coeffs[(n + 3) as usize] * Complex64::from_polar((-PI * (x / width).powi(2)).exp(), phase * x))
                    .expect("fixed grid")
            })
            .collect();
        let r = (|| {
            let a = babenko(p)?;
            let ratios = corpus.par_iter().map(|fh| hybrid_hy_ratio(fh, p, DEFAULT_THETA_RESOLUTION)).collect::<hysharp::Result<Vec<_>>>()?;
            let excess = ratios.iter().map(|r| r / a - 1.0).fold(f64::NEG_INFINITY, f64::max);
            Ok(VerificationReport::new("hybrid_constant", "hybrid/sharp-constant")
                .param("p", p)
                .param("members", corpus.len())
                .computed("max_ratio_excess", num(excess))
                .reference("babenko", a)
                .tolerance(tol)
                .pass(excess <= tol))
        })();
        out.reports.push(guarded("hybrid_constant", "hybrid/sharp-constant", r));
    }

    let mut rng = rng_for(cfg, 20);
    for &delta in &cfg.delta {
        let coeffs: Vec<(i64, f64)> = (-5..=5).map(|n| (n, rng.random_range(-1.0..1.0))).collect();
        let base = bumps(g, delta, &coeffs);
        let diag = (|| {
            let lifted = lift(&base, delta)?;
            let mut err = 0.0f64;
            for theta in [0.0, 0.2, 0.5, 0.9] {
                for k in -3..=3 {
                    let xi = k as f64 + theta;
                    err = err.max((hybrid_fourier_at(&lifted, theta, xi)? - fourier_at(&base, &[xi])?[0]).norm());
                }
            }
            Ok(VerificationReport::new("hybrid_diagonal", "hybrid/diagonal-identity")
                .param("delta", delta)
                .computed("max_abs_err", num(err))
                .tolerance(1e-6)
                .pass(err < 1e-6))
        })();
        out.reports.push(guarded("hybrid_diagonal", "hybrid/diagonal-identity", diag));
        for &p in &exps {
            let r = lift_near_extremizer_check(&base, delta, p, None);
            if let Ok(r) = &r {
                let get = |m: &std::collections::BTreeMap<String, serde_json::Value>, k: &str| m.get(k).map(|v| v.to_string()).unwrap_or_default();
                table.push(vec![
                    f(p),
                    f(delta),
                    get(&r.computed, "ratio_f"),
                    get(&r.computed, "ratio_lift"),
                    get(&r.computed, "gap"),
                    get(&r.reference, "floor"),
                ]);
            }
            out.reports.push(guarded("lift_near_extremizer", "hybrid/lift-near-extremizer", r));
        }
    }
    out.tables.push(table);
    Ok(out)
}

/// Shortest interval holding `mass` of e^{−πs x²}.
fn gaussian_width(s: f64, mass: f64) -> f64 {
    2.0 * statrs::function::erf::erf_inv(mass) / (PI * s).sqrt()
}

fn extraction(cfg: &RunConfig) -> Result<SuiteOutput, UsageError> {
    let g = grid(cfg, 1, (8.0, 1024))?;
    let tol = cfg.tol_or(1e-6);
    let mut out = SuiteOutput::default();
    let mut table = Table::new(
        "extraction.csv",
        &["p", "eta", "input", "normalized_ratio", "level", "rank", "progression_measure", "mass_fraction", "flatness", "pinned"],
    );
    let mut structures = Vec::new();
    for p in cfg.exponents(&P_ONE) {
        let inputs: Vec<(&str, hysharp::Result<SampledFunction>)> = vec![
            ("gaussian", Ok(SampledFunction::gaussian(g))),
            ("perturbed", normal_direction(&[3], p, &g).and_then(|psi| SampledFunction::gaussian(g).add(&psi.scale(c(0.1))))),
        ];
        for (label, input) in &inputs {
            for &eta in &cfg.eta {
                let r = input.as_ref().map_err(|e| e.clone()).and_then(|fun| quasi_extremizer_extract(fun, p, eta));
                let r = r.map(|s| {
                    table.push(vec![
                        f(p),
                        f(eta),
                        label.to_string(),
                        f(s.normalized_ratio),
                        s.level.to_string(),
                        s.progression.rank().to_string(),
                        f(s.progression_measure),
                        f(s.mass_fraction),
                        f(s.flatness),
                        s.pinned.to_string(),
                    ]);
                    let rep = VerificationReport::new("structure_extraction", "extraction/quasi-extremizer-structure")
                        .param("p", p)
                        .param("eta", eta)
                        .param("input", *label)
                        .computed("normalized_ratio", num(s.normalized_ratio))
                        .computed("rank", s.progression.rank())
                        .computed("progression_measure", num(s.progression_measure))
                        .computed("mass_fraction", num(s.mass_fraction))
                        .computed("flatness", num(s.flatness))
                        .computed("pinned", s.pinned)
                        .computed("fallback", s.fallback)
                        .pass(s.pinned && s.mass_fraction > 0.0 && s.flatness.is_finite());
                    structures.push(serde_json::to_value(&s).unwrap_or(serde_json::Value::Null));
                    rep
                });
                out.reports.push(guarded("structure_extraction", "extraction/quasi-extremizer-structure", r));
            }
        }

        let mass = 0.9;
        let r = uncertainty_product(&SampledFunction::gaussian(g), p, mass).map(|u| {
            let q = p / (p - 1.0);
            let predicted = gaussian_width(p, mass) * gaussian_width(q, mass);
            VerificationReport::new("uncertainty_product", "extraction/uncertainty")
                .param("p", p)
                .param("mass", mass)
                .computed("spatial", num(u.spatial))
                .computed("frequency", num(u.frequency))
                .computed("product", num(u.product))
                .reference("product", predicted)
                .tolerance(tol)
                .pass((u.product - predicted).abs() < tol)
        });
        out.reports.push(guarded("uncertainty_product", "extraction/uncertainty", r));
    }
    out.tables.push(table);
    out.artefacts.push(("extraction_structures.json".into(), serde_json::Value::Array(structures)));
    Ok(out)
}
