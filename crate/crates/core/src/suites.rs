//! Verification suites over the public API.
//!
//! Every suite produces a list of checks of the form `measured <= tolerance`
//! and is deterministic for a given seed: random points are drawn up front
//! from a seeded ChaCha stream and parallel reductions are order-independent.

use crate::diagnostics::{
    fit_falloff, fit_in_regime, fit_points, pw_tradeoff_demo, radial_profile, regime_start, residual_order,
    FalloffFit, FalloffModel, FitOptions, ModelChoice, Quantity,
};
use crate::error::{Error, Result};
use crate::fields::DerivativeScheme;
use crate::grid::Linspace;
use crate::solutions::{
    boost_map, eval_cyl, eval_fwm, eval_fxw, CylParams, Family, FwmParams, FxwParams, SpaceTimePoint,
};
use crate::spectra::{packet_1d, quad_cyl, spherical_standing, QuadratureSpec, Spectrum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Relative tolerance on fitted decay rates.
pub const RATE_TOL: f64 = 0.02;
/// Absolute tolerance on fitted prefactor powers of energy densities.
pub const PREFACTOR_TOL: f64 = 0.3;
/// Absolute tolerance on the prefactor power of `|Z|`.
pub const Z_PREFACTOR_TOL: f64 = 0.1;
pub const POINT_TOL: f64 = 1e-12;
pub const ORDER_TOL: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Quadrature,
    Lorentz,
    Invariance,
    Residual,
    Falloff,
    PwTradeoff,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Quadrature,
        Suite::Lorentz,
        Suite::Invariance,
        Suite::Residual,
        Suite::Falloff,
        Suite::PwTradeoff,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Quadrature => "quadrature",
            Suite::Lorentz => "lorentz",
            Suite::Invariance => "invariance",
            Suite::Residual => "residual",
            Suite::Falloff => "falloff",
            Suite::PwTradeoff => "pw-tradeoff",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite '{s}'")))
    }
}

/// One verification check; it passes when `measured <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Number of point evaluations the check aggregates.
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn bound(name: impl Into<String>, measured: f64, tolerance: f64, samples: usize) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            pass: measured <= tolerance,
            samples,
            note: None,
        }
    }

    /// A classification check: measured is 0 on a match and 1 otherwise.
    pub fn class(name: impl Into<String>, got: FalloffModel, expected: FalloffModel) -> Self {
        let measured = if got == expected { 0.0 } else { 1.0 };
        Self::bound(name, measured, 0.0, 1).with_note(format!("{got}, expected {expected}"))
    }

    /// A check that could not be evaluated.
    pub fn failed(name: impl Into<String>, tolerance: f64, error: &Error) -> Self {
        Self {
            name: name.into(),
            measured: f64::INFINITY,
            tolerance,
            pass: false,
            samples: 0,
            note: Some(error.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(suite: Suite, seed: u64, checks: Vec<Check>) -> Self {
        Self {
            suite,
            seed,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match suite {
        Suite::Quadrature => quadrature_checks(&mut rng),
        Suite::Lorentz => lorentz_checks(&mut rng),
        Suite::Invariance => invariance_checks(&mut rng),
        Suite::Residual => residual_checks(&mut rng),
        Suite::Falloff => falloff_checks(),
        Suite::PwTradeoff => pw_tradeoff_checks(),
    };
    Report::new(suite, seed, checks)
}

fn attempt(name: &str, tolerance: f64, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::failed(name, tolerance, &e))
}

fn max_of(values: impl ParallelIterator<Item = f64>) -> f64 {
    values.reduce(|| 0.0, f64::max)
}

/// Closed-form `1/(2 pi (delta - i x))` of the exponential-spectrum packet.
fn packet_exact(x: f64, delta: f64) -> Complex64 {
    1.0 / (2.0 * PI * Complex64::new(delta, -x))
}

/// Closed form `1/((delta + i tau)^2 + r^2)` of the exponential-spectrum standing wave.
fn standing_exact(r: f64, tau: f64, delta: f64) -> Complex64 {
    let s = Complex64::new(delta, tau);
    1.0 / (s * s + r * r)
}

/// Sample drawn for the `quad_cyl` oracle comparison.
#[derive(Debug, Clone, Copy)]
pub struct OracleSample {
    pub point: SpaceTimePoint,
    pub params: CylParams,
}

/// `count` points with `rho` in `[0, 30]`, `|z| <= 10`, `|tau| <= 5`,
/// `delta` in `{0.1, 1}` and either sign of `k0`, in units of `l`.
pub fn oracle_samples(rng: &mut ChaCha8Rng, count: usize) -> Vec<OracleSample> {
    (0..count)
        .map(|_| {
            let point = SpaceTimePoint {
                rho: rng.random_range(0.0..30.0),
                z: rng.random_range(-10.0..10.0),
                tau: rng.random_range(-5.0..5.0),
            };
            let k0 = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let delta = if rng.random_bool(0.5) { 0.1 } else { 1.0 };
            OracleSample {
                point,
                params: CylParams::new(k0, delta).expect("valid oracle parameters"),
            }
        })
        .collect()
}

fn quadrature_checks(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let spec = QuadratureSpec::default();
    let samples = oracle_samples(rng, 200);
    let results: Result<Vec<(f64, bool)>> = samples
        .par_iter()
        .map(|s| {
            let exact = eval_cyl(s.point, &s.params);
            let est = quad_cyl(s.point, &s.params, &spec)?;
            let deviation = (est.value - exact).norm();
            let allowed = (1e-8 * exact.norm()).max(1e-14);
            Ok((deviation / allowed, est.error >= deviation))
        })
        .collect();
    let mut checks = match results {
        Ok(r) => {
            let worst = r.iter().map(|(d, _)| *d).fold(0.0, f64::max);
            let dishonest = r.iter().filter(|(_, honest)| !honest).count() as f64 / r.len() as f64;
            vec![
                Check::bound("quad_cyl deviation / max(1e-8 |exact|, 1e-14)", worst, 1.0, r.len()),
                Check::bound("quad_cyl fraction of error estimates below the true error", dishonest, 0.05, r.len()),
            ]
        }
        Err(e) => vec![Check::failed("quad_cyl deviation / max(1e-8 |exact|, 1e-14)", 1.0, &e)],
    };

    let delta = 1.0;
    let spectrum = Spectrum::exponential(delta).expect("positive delta");
    let xs = Linspace::new(-100.0 * delta, 100.0 * delta, 201).expect("valid grid").points();
    checks.push(attempt("packet_1d relative deviation", 1e-10, || {
        let worst = xs
            .par_iter()
            .map(|&x| {
                let exact = packet_exact(x, delta);
                packet_1d(x, &spectrum, &spec).map(|e| (e.value - exact).norm() / exact.norm())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(Check::bound("packet_1d relative deviation", worst, 1e-10, xs.len()))
    }));

    let points: Vec<(f64, f64)> = (0..100)
        .map(|_| (rng.random_range(0.0..100.0), rng.random_range(-10.0..10.0)))
        .collect();
    checks.push(attempt("spherical_standing relative deviation", 1e-10, || {
        let worst = points
            .par_iter()
            .map(|&(r, tau)| {
                let exact = standing_exact(r, tau, delta);
                spherical_standing(r, tau, &spectrum, &spec).map(|e| (e.value - exact).norm() / exact.norm())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(Check::bound("spherical_standing relative deviation", worst, 1e-10, points.len()))
    }));
    checks
}

fn lorentz_checks(rng: &mut ChaCha8Rng) -> Vec<Check> {
    [0.5, 0.8, 0.995]
        .into_iter()
        .map(|beta| {
            let name = format!("max |eval_fxw - eval_cyl(boost)| at beta = {beta}");
            let q = FxwParams::new(1.0, 0.1, beta).expect("valid X wave parameters");
            let points: Vec<SpaceTimePoint> = (0..100)
                .map(|_| SpaceTimePoint {
                    rho: rng.random_range(0.0..10.0),
                    z: rng.random_range(-10.0..10.0),
                    tau: rng.random_range(-10.0..10.0),
                })
                .collect();
            attempt(&name, POINT_TOL, || {
                let deviations = points
                    .par_iter()
                    .map(|&p| Ok((eval_fxw(p, &q) - eval_cyl(boost_map(p, beta)?, &q.rest_frame())).norm()))
                    .collect::<Result<Vec<f64>>>()?;
                let worst = max_of(deviations.into_par_iter());
                Ok(Check::bound(name.clone(), worst, POINT_TOL, points.len()))
            })
        })
        .collect()
}

/// X wave used by the invariance suite: `k0 = 1`, `delta = l`, `beta = 0.8`.
fn invariance_fxw() -> FxwParams {
    FxwParams::new(1.0, 1.0, 0.8).expect("valid X wave parameters")
}

fn invariance_checks(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let fxw = invariance_fxw();
    let fwm = FwmParams::new(1.0, 1.0).expect("valid focus wave parameters");
    let lambda = fxw.lambda();
    let draws: Vec<(SpaceTimePoint, f64)> = (0..100)
        .map(|_| {
            let p = SpaceTimePoint {
                rho: rng.random_range(0.0..5.0),
                z: rng.random_range(-5.0..5.0),
                tau: rng.random_range(-5.0..5.0),
            };
            (p, rng.random_range(-1.0e3..1.0e3))
        })
        .collect();

    let fxw_norm = Family::Fxw(fxw).origin_modulus();
    let fxw_dev = max_of(draws.par_iter().map(|&(p, d)| {
        let delta = d * lambda;
        let moved = SpaceTimePoint {
            z: p.z + delta / fxw.beta(),
            tau: p.tau + delta,
            ..p
        };
        (eval_fxw(moved, &fxw).norm() - eval_fxw(p, &fxw).norm()).abs() / fxw_norm
    }));
    let fwm_norm = Family::Fwm(fwm).origin_modulus();
    let fwm_dev = max_of(draws.par_iter().map(|&(p, d)| {
        let moved = SpaceTimePoint {
            z: p.z + d,
            tau: p.tau + d,
            ..p
        };
        (eval_fwm(moved, &fwm).norm() - eval_fwm(p, &fwm).norm()).abs() / fwm_norm
    }));

    let mut checks = vec![
        Check::bound("X wave |Z| change under (z + d/beta, tau + d)", fxw_dev, POINT_TOL, draws.len()),
        Check::bound("focus wave mode |Z| change under (z + d, tau + d)", fwm_dev, POINT_TOL, draws.len()),
    ];
    checks.extend(persistence_checks());
    checks
}

/// Waist-plane fits of the Fig.-1 X wave at `tau` in `{0, 50, 500}` wavelengths.
pub fn waist_plane_fits() -> Result<Vec<(f64, FalloffFit)>> {
    let q = FxwParams::new(1.0, 0.1, 0.8)?;
    let family = Family::Fxw(q);
    let grid = Linspace::new(0.0, 30.0, 601)?.points();
    [0.0, 50.0, 500.0]
        .into_iter()
        .map(|cycles| {
            let tau = cycles * q.lambda();
            let profile = radial_profile(&family, Quantity::Z, tau / q.beta(), tau, &grid, &DerivativeScheme::default())?;
            Ok((tau, fit_in_regime(&profile, &family)?))
        })
        .collect()
}

fn persistence_checks() -> Vec<Check> {
    let name = "X wave waist-plane rate spread over tau in {0, 50, 500} wavelengths";
    match waist_plane_fits() {
        Ok(fits) => {
            let reference = fits[0].1.rate;
            let spread = fits
                .iter()
                .map(|(_, f)| ((f.rate - reference) / reference).abs())
                .fold(0.0, f64::max);
            let mut checks = vec![Check::bound(name, spread, RATE_TOL, fits.len())];
            for (tau, fit) in &fits {
                checks.push(Check::class(
                    format!("X wave waist-plane class at tau = {tau:.6}"),
                    fit.model,
                    FalloffModel::Exponential,
                ));
            }
            checks
        }
        Err(e) => vec![Check::failed(name, RATE_TOL, &e)],
    }
}

/// The three families with `delta = l = a = 1` used for residual checks.
pub fn residual_families() -> [Family; 3] {
    [
        Family::Cyl(CylParams::new(1.0, 1.0).expect("valid")),
        Family::Fxw(FxwParams::new(1.0, 1.0, 0.8).expect("valid")),
        Family::Fwm(FwmParams::new(1.0, 1.0).expect("valid")),
    ]
}

/// Base step of the residual convergence study.
pub const RESIDUAL_STEP: f64 = 0.02;

fn residual_checks(rng: &mut ChaCha8Rng) -> Vec<Check> {
    residual_families()
        .into_iter()
        .map(|family| {
            let points: Vec<SpaceTimePoint> = (0..20)
                .map(|_| SpaceTimePoint {
                    rho: rng.random_range(0.5..3.0),
                    z: rng.random_range(-2.0..2.0),
                    tau: rng.random_range(-2.0..2.0),
                })
                .collect();
            let name = format!("{} max |order - 2| under step halving", family.name());
            attempt(&name, ORDER_TOL, || {
                let orders = points
                    .par_iter()
                    .map(|&p| residual_order(&family, p, RESIDUAL_STEP))
                    .collect::<Result<Vec<f64>>>()?;
                let worst = orders.iter().map(|o| (o - 2.0).abs()).fold(0.0, f64::max);
                Ok(Check::bound(name.clone(), worst, ORDER_TOL, points.len()))
            })
        })
        .collect()
}

fn rate_check(name: &str, fit: &FalloffFit, expected: f64) -> Check {
    Check::bound(
        format!("{name} relative rate error"),
        ((fit.rate - expected) / expected).abs(),
        RATE_TOL,
        fit.points,
    )
    .with_note(format!("{} rate {:.6}, expected {expected}", fit.model, fit.rate))
}

fn power_check(name: &str, fit: &FalloffFit, expected: f64, tolerance: f64) -> Check {
    Check::bound(
        format!("{name} prefactor power error"),
        (fit.prefactor_power - expected).abs(),
        tolerance,
        fit.points,
    )
    .with_note(format!("q = {:.6}, expected {expected}", fit.prefactor_power))
}

const SUBLEADING: FitOptions = FitOptions {
    abs_floor: 1e-250,
    rel_floor: 0.0,
    subleading: true,
};

fn falloff_checks() -> Vec<Check> {
    let scheme = DerivativeScheme::default();
    let cyl = Family::Cyl(CylParams::new(1.0, 0.1).expect("valid"));
    let fxw = Family::Fxw(FxwParams::new(1.0, 0.1, 0.8).expect("valid"));
    let fwm = Family::Fwm(FwmParams::new(1.0, 1.0).expect("valid"));
    let grid = Linspace::new(0.0, 30.0, 601).expect("valid").points();
    let fwm_grid = Linspace::new(0.0, 15.0, 301).expect("valid").points();
    let profile = |family: &Family, quantity, z, tau, grid: &[f64]| radial_profile(family, quantity, z, tau, grid, &scheme);

    let mut checks = Vec::new();
    let mut run = |name: &str, f: &dyn Fn() -> Result<Vec<Check>>| match f() {
        Ok(c) => checks.extend(c),
        Err(e) => checks.push(Check::failed(name, RATE_TOL, &e)),
    };

    run("cyl |Z|", &|| {
        let fit = fit_falloff(&profile(&cyl, Quantity::Z, 0.0, 0.0, &grid)?, [5.0, 25.0])?;
        Ok(vec![
            Check::class("cyl |Z| class", fit.model, FalloffModel::Exponential),
            rate_check("cyl |Z|", &fit, 1.0),
            power_check("cyl |Z|", &fit, -1.0, Z_PREFACTOR_TOL),
        ])
    });
    run("cyl |dZ/dtau|", &|| {
        let fit = fit_falloff(&profile(&cyl, Quantity::DtauZ, 0.0, 0.0, &grid)?, [5.0, 25.0])?;
        Ok(vec![
            Check::class("cyl |dZ/dtau| class", fit.model, FalloffModel::Exponential),
            rate_check("cyl |dZ/dtau|", &fit, 1.0),
        ])
    });
    run("cyl |Z| at tau = 2.5", &|| {
        let fit = fit_in_regime(&profile(&cyl, Quantity::Z, 0.0, 2.5, &grid)?, &cyl)?;
        Ok(vec![Check::class("cyl |Z| at tau = 2.5 class", fit.model, FalloffModel::Exponential)])
    });
    run("X wave |Z| at tau = 2.5", &|| {
        let fit = fit_in_regime(&profile(&fxw, Quantity::Z, 0.0, 2.5, &grid)?, &fxw)?;
        Ok(vec![Check::class("X wave |Z| at tau = 2.5 class", fit.model, FalloffModel::Exponential)])
    });
    run("cyl |F|^2", &|| {
        let p = profile(&cyl, Quantity::F2, 0.0, 0.0, &grid)?;
        let window = [regime_start(&cyl, 0.0, 0.0), p.rho_max()];
        let auto = fit_falloff(&p, window)?;
        let fit = fit_points(p.rho(), p.value(), window, ModelChoice::Exp, &SUBLEADING)?;
        Ok(vec![
            Check::class("cyl |F|^2 class", auto.model, FalloffModel::Exponential),
            rate_check("cyl |F|^2", &fit, 2.0),
            power_check("cyl |F|^2 leading", &fit, -2.0, PREFACTOR_TOL),
        ])
    });
    run("X wave waist-plane |Z|", &|| {
        let fit = fit_in_regime(&profile(&fxw, Quantity::Z, 0.0, 0.0, &grid)?, &fxw)?;
        Ok(vec![
            Check::class("X wave waist-plane |Z| class", fit.model, FalloffModel::Exponential),
            rate_check("X wave waist-plane |Z|", &fit, 1.0),
        ])
    });
    run("focus wave mode |Z|", &|| {
        let fit = fit_falloff(&profile(&fwm, Quantity::Z, 0.0, 0.0, &fwm_grid)?, [5.0, 12.0])?;
        Ok(vec![
            Check::class("focus wave mode |Z| class", fit.model, FalloffModel::Gaussian),
            rate_check("focus wave mode |Z|", &fit, 0.5),
        ])
    });
    run("focus wave mode |F|^2", &|| {
        let p = profile(&fwm, Quantity::F2, 0.0, 0.0, &fwm_grid)?;
        let auto = fit_falloff(&p, [5.0, 12.0])?;
        let fit = fit_points(p.rho(), p.value(), [5.0, 12.0], ModelChoice::Gauss, &SUBLEADING)?;
        Ok(vec![
            Check::class("focus wave mode |F|^2 class", auto.model, FalloffModel::Gaussian),
            rate_check("focus wave mode |F|^2", &fit, 1.0),
            power_check("focus wave mode |F|^2 leading", &fit, 6.0, PREFACTOR_TOL),
        ])
    });
    checks
}

/// Radial grid of the spherical standing-wave demo, in units of `l`.
pub fn tradeoff_grid() -> Vec<f64> {
    Linspace::new(4.0, 30.0, 261).expect("valid").points()
}

fn pw_tradeoff_checks() -> Vec<Check> {
    let spec = QuadratureSpec::default();
    let grid = tradeoff_grid();
    let mut checks = Vec::new();
    let cases = [
        ("gaussian-odd", Spectrum::gaussian_odd(), FalloffModel::Gaussian),
        ("exponential", Spectrum::exponential(1.0).expect("valid"), FalloffModel::Power),
    ];
    for (label, spectrum, expected) in cases {
        match pw_tradeoff_demo(&spectrum, &grid, &spec) {
            Ok(report) => {
                checks.push(Check::class(format!("{label} |Z| class"), report.superpotential.model, expected));
                checks.push(Check::class(
                    format!("{label} |dZ/dtau| class"),
                    report.time_derivative.model,
                    FalloffModel::Power,
                ));
            }
            Err(e) => checks.push(Check::failed(format!("{label} spectrum demo"), 0.0, &e)),
        }
    }

    let delta = 1.0;
    let spectrum = Spectrum::exponential(delta).expect("valid");
    let xs = Linspace::new(10.0 * delta, 100.0 * delta, 181).expect("valid").points();
    checks.push(attempt("packet_1d tail class", 0.0, || {
        let value = xs
            .par_iter()
            .map(|&x| packet_1d(x, &spectrum, &spec).map(|e| e.value.norm()))
            .collect::<Result<Vec<_>>>()?;
        let fit = fit_points(&xs, &value, [xs[0], xs[xs.len() - 1]], ModelChoice::Auto, &FitOptions::default())?;
        Ok(Check::class("packet_1d tail class", fit.model, FalloffModel::Power))
    }));
    checks
}
