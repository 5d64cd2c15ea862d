//! Localization diagnostics: radial profiles, falloff fits, the asymptotic
//! regime window and finite-difference wave-equation residuals.

use crate::error::{Error, Result};
use crate::fields::{dtau_superpotential, energy_density, superpotential, DerivativeScheme};
use crate::solutions::{Family, SpaceTimePoint};
use crate::spectra::{spherical_standing, QuadratureSpec, Spectrum};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Minimum number of samples in a fit window.
pub const MIN_FIT_POINTS: usize = 8;
/// Minimum number of samples in a radial profile.
pub const MIN_PROFILE_POINTS: usize = 16;
/// A faster-decaying model must beat the slower one by this rms factor.
pub const SELECTION_MARGIN: f64 = 2.0;
/// Below this rms (log space) two fits are considered tied.
pub const TIE_RMS: f64 = 1e-10;
/// A decay term is only credited when it accounts for at least this many
/// e-folds across the window.
pub const MIN_DECAY_EFOLDS: f64 = 1.0;
/// Quadrature samples are kept only when they exceed their error bound by this factor.
pub const QUADRATURE_SIGNIFICANCE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "dtauZ")]
    DtauZ,
    #[serde(rename = "F2")]
    F2,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Z => "Z",
            Quantity::DtauZ => "dtauZ",
            Quantity::F2 => "F2",
        })
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Quantity::Z),
            "dtauZ" | "dtauz" => Ok(Quantity::DtauZ),
            "F2" | "f2" => Ok(Quantity::F2),
            other => Err(Error::InvalidParams(format!("unknown quantity '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub family: Option<Family>,
    pub quantity: Option<Quantity>,
    pub z: f64,
    pub tau: f64,
}

/// `|quantity|` sampled against `rho` at fixed `(z, tau)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    rho: Vec<f64>,
    value: Vec<f64>,
    meta: ProfileMeta,
}

impl RadialProfile {
    pub fn new(rho: Vec<f64>, value: Vec<f64>, meta: ProfileMeta) -> Result<Self> {
        if rho.len() != value.len() {
            return Err(Error::InvalidProfile(format!(
                "{} abscissas but {} values",
                rho.len(),
                value.len()
            )));
        }
        if rho.len() < MIN_PROFILE_POINTS {
            return Err(Error::InvalidProfile(format!(
                "{} samples, at least {MIN_PROFILE_POINTS} required",
                rho.len()
            )));
        }
        if rho.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) || rho.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidProfile("abscissas must be finite and strictly increasing".into()));
        }
        if value.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidProfile("values must be finite and non-negative".into()));
        }
        Ok(Self { rho, value, meta })
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn value(&self) -> &[f64] {
        &self.value
    }

    pub fn meta(&self) -> &ProfileMeta {
        &self.meta
    }

    pub fn rho_max(&self) -> f64 {
        *self.rho.last().expect("profile is never empty")
    }
}

/// Pointwise `|quantity|` of a family, normalized by its value at the origin.
///
/// `Z` is already normalized to `|Z(0,0,0)| = 1`; `dtauZ` and `F2` are
/// divided by their own moduli at the origin so that curves are comparable.
pub fn modulus(family: &Family, quantity: Quantity, p: SpaceTimePoint, scheme: &DerivativeScheme) -> Result<f64> {
    let origin = SpaceTimePoint { rho: 0.0, z: 0.0, tau: 0.0 };
    let (value, reference) = match quantity {
        Quantity::Z => (superpotential(p, family)?.norm(), 1.0),
        Quantity::DtauZ => (
            dtau_superpotential(p, family, scheme)?.norm(),
            dtau_superpotential(origin, family, scheme)?.norm(),
        ),
        Quantity::F2 => (
            energy_density(p, family, scheme)?,
            energy_density(origin, family, scheme)?,
        ),
    };
    Ok(if reference > 0.0 { value / reference } else { value })
}

pub fn radial_profile(
    family: &Family,
    quantity: Quantity,
    z: f64,
    tau: f64,
    rho_grid: &[f64],
    scheme: &DerivativeScheme,
) -> Result<RadialProfile> {
    let value = rho_grid
        .par_iter()
        .map(|&rho| modulus(family, quantity, SpaceTimePoint::new(rho, z, tau)?, scheme))
        .collect::<Result<Vec<_>>>()?;
    RadialProfile::new(
        rho_grid.to_vec(),
        value,
        ProfileMeta {
            family: Some(*family),
            quantity: Some(quantity),
            z,
            tau,
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FalloffModel {
    /// `v = C rho^(-p)`
    Power,
    /// `v = C rho^q exp(-r rho)`
    Exponential,
    /// `v = C rho^q exp(-r rho^2)`
    Gaussian,
}

impl fmt::Display for FalloffModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FalloffModel::Power => "POWER",
            FalloffModel::Exponential => "EXPONENTIAL",
            FalloffModel::Gaussian => "GAUSSIAN",
        })
    }
}

/// Model to fit: a fixed one, or automatic selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Auto,
    Power,
    Exp,
    Gauss,
}

impl FromStr for ModelChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(ModelChoice::Auto),
            "power" => Ok(ModelChoice::Power),
            "exp" => Ok(ModelChoice::Exp),
            "gauss" => Ok(ModelChoice::Gauss),
            other => Err(Error::InvalidParams(format!("unknown model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalloffFit {
    pub model: FalloffModel,
    /// `r` (1/length) for EXPONENTIAL, `r` (1/length^2) for GAUSSIAN, `p` for POWER.
    pub rate: f64,
    /// Exponent `q` of the `rho^q` prefactor (`-p` for POWER).
    pub prefactor_power: f64,
    /// `ln C`.
    pub log_amplitude: f64,
    /// Coefficient `b` of the subleading prefactor correction, when fitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<f64>,
    /// Root-mean-square residual of `ln v`.
    pub rms_residual: f64,
    pub points: usize,
    pub window: [f64; 2],
}

impl FalloffFit {
    /// Number of e-folds the decay term accounts for across the window.
    fn decay_efolds(&self) -> f64 {
        let [lo, hi] = self.window;
        match self.model {
            FalloffModel::Power => 0.0,
            FalloffModel::Exponential => self.rate * (hi - lo),
            FalloffModel::Gaussian => self.rate * (hi * hi - lo * lo),
        }
    }
}

/// Sample floors applied before taking logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub abs_floor: f64,
    /// Samples below `rel_floor` times the window maximum are dropped.
    pub rel_floor: f64,
    /// Also fit a first-order correction to the prefactor, `rho^q (1 + b/rho)`
    /// (`b/rho^2` for GAUSSIAN), so that `prefactor_power` is the leading power.
    #[serde(default)]
    pub subleading: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            abs_floor: 1e-250,
            rel_floor: 0.0,
            subleading: false,
        }
    }
}

/// Fits the profile over `window` with automatic model selection.
pub fn fit_falloff(profile: &RadialProfile, window: [f64; 2]) -> Result<FalloffFit> {
    fit_points(
        profile.rho(),
        profile.value(),
        window,
        ModelChoice::Auto,
        &FitOptions::default(),
    )
}

/// Fits `ln v` against the three falloff models by linear least squares.
///
/// With [`ModelChoice::Auto`] the slowest model (POWER) is the default; a
/// faster one replaces it only if its decay term is significant (positive
/// rate, at least [`MIN_DECAY_EFOLDS`] across the window) and its rms residual
/// is smaller by [`SELECTION_MARGIN`], or both residuals are at the noise floor.
pub fn fit_points(
    rho: &[f64],
    value: &[f64],
    window: [f64; 2],
    choice: ModelChoice,
    options: &FitOptions,
) -> Result<FalloffFit> {
    let [lo, hi] = window;
    let in_window: Vec<(f64, f64)> = rho
        .iter()
        .zip(value)
        .filter(|(r, _)| **r >= lo && **r <= hi && **r > 0.0)
        .map(|(r, v)| (*r, *v))
        .collect();
    if in_window.len() < MIN_FIT_POINTS {
        return Err(Error::WindowTooNarrow {
            points: in_window.len(),
            required: MIN_FIT_POINTS,
        });
    }
    let peak = in_window.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    let floor = options.abs_floor.max(options.rel_floor * peak);
    let (x, y): (Vec<f64>, Vec<f64>) = in_window
        .iter()
        .filter(|(_, v)| v.is_finite() && *v > floor)
        .map(|(r, v)| (*r, v.ln()))
        .unzip();
    if x.len() < MIN_FIT_POINTS {
        return Err(Error::DynamicRangeExceeded {
            usable: x.len(),
            points: in_window.len(),
        });
    }
    let span = [x[0], x[x.len() - 1]];

    let fit = |model| fit_model(model, &x, &y, span, options.subleading);
    match choice {
        ModelChoice::Power => fit(FalloffModel::Power),
        ModelChoice::Exp => fit(FalloffModel::Exponential),
        ModelChoice::Gauss => fit(FalloffModel::Gaussian),
        ModelChoice::Auto => {
            let mut best = fit(FalloffModel::Power)?;
            for model in [FalloffModel::Exponential, FalloffModel::Gaussian] {
                let candidate = fit(model)?;
                let significant = candidate.rate > 0.0 && candidate.decay_efolds() >= MIN_DECAY_EFOLDS;
                let wins = candidate.rms_residual * SELECTION_MARGIN <= best.rms_residual
                    || (best.rms_residual <= TIE_RMS && candidate.rms_residual <= TIE_RMS);
                if significant && wins {
                    best = candidate;
                }
            }
            Ok(best)
        }
    }
}

fn fit_model(model: FalloffModel, x: &[f64], y: &[f64], span: [f64; 2], subleading: bool) -> Result<FalloffFit> {
    let n = x.len();
    // columns: 1, ln rho, the decay term, the optional correction; rho is
    // scaled by the window end for conditioning
    let scale = span[1];
    let decay = usize::from(model != FalloffModel::Power);
    let columns = 2 + decay + usize::from(subleading);
    if n <= columns {
        return Err(Error::WindowTooNarrow {
            points: n,
            required: columns + 1,
        });
    }
    let mut a = DMatrix::<f64>::zeros(n, columns);
    for (i, &r) in x.iter().enumerate() {
        let s = r / scale;
        a[(i, 0)] = 1.0;
        a[(i, 1)] = s.ln();
        match model {
            FalloffModel::Power => {}
            FalloffModel::Exponential => a[(i, 2)] = -s,
            FalloffModel::Gaussian => a[(i, 2)] = -s * s,
        }
        if subleading {
            a[(i, columns - 1)] = match model {
                FalloffModel::Gaussian => 1.0 / (s * s),
                _ => 1.0 / s,
            };
        }
    }
    let b = DVector::from_column_slice(y);
    let norms: Vec<f64> = (0..columns).map(|j| a.column(j).norm()).collect();
    for (j, norm) in norms.iter().enumerate() {
        a.column_mut(j).scale_mut(1.0 / norm);
    }
    let coef = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidProfile(format!("least squares failed: {e}")))?;
    let residual = &a * &coef - &b;
    let rms = (residual.norm_squared() / n as f64).sqrt();
    let c: Vec<f64> = coef.iter().zip(&norms).map(|(c, s)| c / s).collect();

    let q = c[1];
    let log_amplitude = c[0] - q * scale.ln();
    let (rate, prefactor_power) = match model {
        FalloffModel::Power => (-q, q),
        FalloffModel::Exponential => (c[2] / scale, q),
        FalloffModel::Gaussian => (c[2] / (scale * scale), q),
    };
    let correction = subleading.then(|| match model {
        FalloffModel::Gaussian => c[columns - 1] * scale * scale,
        _ => c[columns - 1] * scale,
    });
    Ok(FalloffFit {
        model,
        rate,
        prefactor_power,
        log_amplitude,
        correction,
        rms_residual: rms,
        points: n,
        window: span,
    })
}

/// Radial window where the asymptotic falloff laws apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeWindow {
    pub rho_min: f64,
    pub rho_max: f64,
    pub points: usize,
}

impl RegimeWindow {
    pub fn bounds(&self) -> [f64; 2] {
        [self.rho_min, self.rho_max]
    }
}

/// Start of the asymptotic regime, `rho >> tau` and `rho >> Delta`, taken as
/// five times the largest of the shape time, `Delta` and `l` (tube pulse and X
/// wave) or of the waist distance and `sqrt(l a)` (focus wave mode).
pub fn regime_start(family: &Family, z: f64, tau: f64) -> f64 {
    let t = family.shape_time(z, tau).abs();
    let scale = match family {
        Family::Cyl(q) => t.max(q.delta()).max(q.length_scale()),
        Family::Fxw(q) => t.max(q.delta()).max(q.length_scale()),
        Family::Fwm(q) => t.max(q.waist_scale()),
    };
    5.0 * scale
}

pub fn check_localization_conditions(profile: &RadialProfile, family: &Family) -> Result<RegimeWindow> {
    let meta = profile.meta();
    let rho_min = regime_start(family, meta.z, meta.tau);
    let rho_max = profile.rho_max();
    let points = profile.rho().iter().filter(|r| **r >= rho_min).count();
    if rho_min > rho_max || points == 0 {
        return Err(Error::EmptyWindow { rho_min, rho_max });
    }
    Ok(RegimeWindow {
        rho_min,
        rho_max,
        points,
    })
}

/// Fit restricted to the asymptotic regime window.
pub fn fit_in_regime(profile: &RadialProfile, family: &Family) -> Result<FalloffFit> {
    let window = check_localization_conditions(profile, family)?;
    fit_falloff(profile, window.bounds())
}

/// Anything that can be sampled as a scalar wave.
pub trait ScalarWave {
    fn psi(&self, p: SpaceTimePoint) -> Complex64;
}

impl ScalarWave for Family {
    fn psi(&self, p: SpaceTimePoint) -> Complex64 {
        Family::psi(self, p)
    }
}

/// Reference fields for exercising [`wave_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DebugField {
    /// `exp(i k0 (z - tau))`, an exact solution.
    PlaneWave { k0: f64 },
    /// Static `rho^2`, not a solution: its residual is 4.
    RhoSquared,
}

impl ScalarWave for DebugField {
    fn psi(&self, p: SpaceTimePoint) -> Complex64 {
        match *self {
            DebugField::PlaneWave { k0 } => Complex64::from_polar(1.0, k0 * (p.z - p.tau)),
            DebugField::RhoSquared => Complex64::new(p.rho * p.rho, 0.0),
        }
    }
}

/// `|laplacian Psi - d2Psi/dtau2|` from second-order central differences with
/// step `h` in each of `rho`, `z`, `tau`. `Psi` is continued evenly across the
/// axis; on the axis the transverse part is `2 d2Psi/drho2`.
pub fn wave_residual<W: ScalarWave + ?Sized>(field: &W, p: SpaceTimePoint, h: f64) -> Result<f64> {
    p.validate()?;
    let coord = p.rho.abs().max(p.z.abs()).max(p.tau.abs()).max(1.0);
    if !(h.is_finite() && h > 0.0) || h < 64.0 * f64::EPSILON * coord {
        return Err(Error::StepUnderflow { step: h, scale: coord });
    }
    let at = |dr: f64, dz: f64, dt: f64| {
        field.psi(SpaceTimePoint {
            rho: (p.rho + dr).abs(),
            z: p.z + dz,
            tau: p.tau + dt,
        })
    };
    let c = at(0.0, 0.0, 0.0);
    let h2 = h * h;
    let d_rr = (at(h, 0.0, 0.0) - 2.0 * c + at(-h, 0.0, 0.0)) / h2;
    let d_zz = (at(0.0, h, 0.0) - 2.0 * c + at(0.0, -h, 0.0)) / h2;
    let d_tt = (at(0.0, 0.0, h) - 2.0 * c + at(0.0, 0.0, -h)) / h2;
    let transverse = if p.rho == 0.0 {
        2.0 * d_rr
    } else {
        d_rr + (at(h, 0.0, 0.0) - at(-h, 0.0, 0.0)) / (2.0 * h * p.rho)
    };
    Ok((transverse + d_zz - d_tt).norm())
}

/// Observed convergence order `log2(R(h) / R(h/2))`.
pub fn residual_order<W: ScalarWave + ?Sized>(field: &W, p: SpaceTimePoint, h: f64) -> Result<f64> {
    let coarse = wave_residual(field, p, h)?;
    let fine = wave_residual(field, p, 0.5 * h)?;
    Ok((coarse / fine).log2())
}

/// Falloff classes of a spherical standing-wave superpotential and of its
/// `tau`-derivative at `tau = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffReport {
    pub superpotential: FalloffFit,
    pub time_derivative: FalloffFit,
}

/// Samples `|Z(r, 0)|` and `|dZ/dtau(r, 0)|` (the latter as `-i` times the
/// transform of `kappa h(kappa)`) by quadrature and fits both. Samples not
/// resolved above their quadrature error are dropped before fitting.
pub fn pw_tradeoff_demo(
    spectrum: &Spectrum,
    r_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<TradeoffReport> {
    let sample = |sp: Spectrum| -> Result<FalloffFit> {
        let points = r_grid
            .par_iter()
            .map(|&r| spherical_standing(r, 0.0, &sp, spec).map(|e| (r, e)))
            .collect::<Result<Vec<_>>>()?;
        let (rho, value): (Vec<f64>, Vec<f64>) = points
            .iter()
            .filter(|(_, e)| e.value.norm() > QUADRATURE_SIGNIFICANCE * e.error)
            .map(|(r, e)| (*r, e.value.norm()))
            .unzip();
        if rho.len() < MIN_FIT_POINTS {
            return Err(Error::DynamicRangeExceeded {
                usable: rho.len(),
                points: r_grid.len(),
            });
        }
        let window = [rho[0], rho[rho.len() - 1]];
        fit_points(&rho, &value, window, ModelChoice::Auto, &FitOptions::default())
    };
    Ok(TradeoffReport {
        superpotential: sample(*spectrum)?,
        time_derivative: sample(spectrum.times_k())?,
    })
}
