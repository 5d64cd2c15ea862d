//! Command-line arguments, the optional TOML config file, and their merge
//! into validated run settings.
//!
//! A config file holds the same keys as the long flags (without the leading
//! dashes), for example
//!
//! ```toml
//! family = "fxw"
//! delta = 0.1
//! beta = 0.8
//! quantity = "dtauZ"
//! rho-max = 30.0
//! rho-count = 601
//! ```
//!
//! Flags given on the command line take precedence over the file. Unknown keys
//! are rejected; keys that belong to another subcommand are ignored.

use crate::error::CliError;
use clap::{Args, ValueEnum};
use photoloc::diagnostics::{ModelChoice, Quantity, MIN_PROFILE_POINTS};
use photoloc::fields::{DerivativeMode, DerivativeScheme};
use photoloc::grid::Linspace;
use photoloc::solutions::{CylParams, Family, FwmParams, FxwParams};
use serde::Deserialize;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Cyl,
    Fxw,
    Fwm,
}

/// Unit of every length given on the command line and written to output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    /// `l = 1/|k0|` (for the focus wave mode, its parameter `l`).
    L,
    /// `lambda = 2 pi l`.
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeArg {
    ClosedForm,
    FiniteDifference,
    CrossCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Auto,
    Power,
    Exp,
    Gauss,
}

impl From<ModelArg> for ModelChoice {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Auto => ModelChoice::Auto,
            ModelArg::Power => ModelChoice::Power,
            ModelArg::Exp => ModelChoice::Exp,
            ModelArg::Gauss => ModelChoice::Gauss,
        }
    }
}

/// Solution family and its parameters.
#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Signed axial wavenumber in inverse raw length units.
    #[arg(long, allow_hyphen_values = true)]
    pub k0: Option<f64>,
    /// Spectral width parameter, in `--unit` lengths.
    #[arg(long)]
    pub delta: Option<f64>,
    /// X wave velocity parameter in (0, 1).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Focus wave mode `l`, in raw length units.
    #[arg(long = "fwm-l")]
    pub fwm_l: Option<f64>,
    /// Focus wave mode `a`, in `--unit` lengths.
    #[arg(long = "fwm-a")]
    pub fwm_a: Option<f64>,
    #[arg(long, value_enum)]
    pub unit: Option<Unit>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
}

impl FamilyArgs {
    fn or(self, file: &FileConfig) -> Self {
        Self {
            family: self.family.or(file.family),
            k0: self.k0.or(file.k0),
            delta: self.delta.or(file.delta),
            beta: self.beta.or(file.beta),
            fwm_l: self.fwm_l.or(file.fwm_l),
            fwm_a: self.fwm_a.or(file.fwm_a),
            unit: self.unit.or(file.unit),
            z: self.z.or(file.z),
            tau: self.tau.or(file.tau),
        }
    }
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub family: Option<FamilyName>,
    pub k0: Option<f64>,
    pub delta: Option<f64>,
    pub beta: Option<f64>,
    pub fwm_l: Option<f64>,
    pub fwm_a: Option<f64>,
    pub unit: Option<Unit>,
    pub z: Option<f64>,
    pub tau: Option<f64>,
    pub quantity: Option<String>,
    pub rho_min: Option<f64>,
    pub rho_max: Option<f64>,
    pub rho_count: Option<usize>,
    pub reference: Option<bool>,
    pub derivative: Option<DerivativeArg>,
    pub step: Option<f64>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub x_count: Option<usize>,
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    pub z_count: Option<usize>,
    pub output: Option<PathBuf>,
}

/// Defaults that differ between scans and surfaces.
pub struct FamilyDefaults {
    pub family: FamilyName,
    pub k0: f64,
    pub delta: f64,
    pub beta: f64,
    pub unit: Unit,
}

/// Radial scans default to the tube pulse with `Delta = 0.1 l`, `beta = 0.8`.
pub const SCAN_DEFAULTS: FamilyDefaults = FamilyDefaults {
    family: FamilyName::Cyl,
    k0: 1.0,
    delta: 0.1,
    beta: 0.8,
    unit: Unit::L,
};

/// Surfaces default to the X wave with `k0 < 0`, `lambda = 1`, `Delta = 30 lambda`, `beta = 0.995`.
pub const SURFACE_DEFAULTS: FamilyDefaults = FamilyDefaults {
    family: FamilyName::Fxw,
    k0: -2.0 * PI,
    delta: 30.0,
    beta: 0.995,
    unit: Unit::Lambda,
};

/// A resolved family with the raw length of one output unit.
#[derive(Debug, Clone, Copy)]
pub struct Resolved {
    pub family: Family,
    pub unit_length: f64,
    /// `l` of the family in raw units.
    pub l: f64,
    pub z: f64,
    pub tau: f64,
}

impl FamilyArgs {
    pub fn resolve(&self, defaults: &FamilyDefaults) -> Result<Resolved, CliError> {
        let name = self.family.unwrap_or(defaults.family);
        let unit = self.unit.unwrap_or(defaults.unit);
        let per_l = match unit {
            Unit::L => 1.0,
            Unit::Lambda => 2.0 * PI,
        };
        let k0 = self.k0.unwrap_or(defaults.k0);
        let l = match name {
            FamilyName::Fwm => self.fwm_l.unwrap_or(1.0),
            _ => {
                if !(k0.is_finite() && k0 != 0.0) {
                    return Err(CliError::Usage(format!("k0 = {k0} must be finite and non-zero")));
                }
                1.0 / k0.abs()
            }
        };
        let unit_length = per_l * l;
        if !(unit_length.is_finite() && unit_length > 0.0) {
            return Err(CliError::Usage(format!("invalid length unit {unit_length}")));
        }
        let delta = self.delta.unwrap_or(defaults.delta) * unit_length;
        let beta = self.beta.unwrap_or(defaults.beta);
        let family = match name {
            FamilyName::Cyl => CylParams::new(k0, delta).map(Family::Cyl),
            FamilyName::Fxw => FxwParams::new(k0, delta, beta).map(Family::Fxw),
            FamilyName::Fwm => FwmParams::new(l, self.fwm_a.unwrap_or(1.0 / per_l) * unit_length).map(Family::Fwm),
        }
        .map_err(CliError::usage)?;
        let z = self.z.unwrap_or(0.0) * unit_length;
        let tau = self.tau.unwrap_or(0.0) * unit_length;
        if !(z.is_finite() && tau.is_finite()) {
            return Err(CliError::Usage("z and tau must be finite".into()));
        }
        Ok(Resolved {
            family,
            unit_length,
            l,
            z,
            tau,
        })
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Z, dtauZ or F2.
    #[arg(long)]
    pub quantity: Option<String>,
    #[arg(long = "rho-min")]
    pub rho_min: Option<f64>,
    #[arg(long = "rho-max")]
    pub rho_max: Option<f64>,
    #[arg(long = "rho-count")]
    pub rho_count: Option<usize>,
    /// Append the column `exp(-rho/l)`.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub reference: Option<bool>,
    #[arg(long, value_enum)]
    pub derivative: Option<DerivativeArg>,
    /// Finite-difference step relative to the local length scale.
    #[arg(long)]
    pub step: Option<f64>,
    /// Output path; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// TOML file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long = "x-min", allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long = "x-max", allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[arg(long = "x-count")]
    pub x_count: Option<usize>,
    #[arg(long = "z-min", allow_hyphen_values = true)]
    pub z_min: Option<f64>,
    #[arg(long = "z-max", allow_hyphen_values = true)]
    pub z_max: Option<f64>,
    #[arg(long = "z-count")]
    pub z_count: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn linspace(name: &str, start: f64, stop: f64, count: usize) -> Result<Linspace, CliError> {
    Linspace::new(start, stop, count).map_err(|e| CliError::Usage(format!("{name} grid: {e}")))
}

/// Validated settings of a radial scan, lengths in raw units.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub resolved: Resolved,
    pub quantity: Quantity,
    pub rho: Linspace,
    pub reference: bool,
    pub scheme: DerivativeScheme,
    pub output: Option<PathBuf>,
}

impl ScanArgs {
    pub fn into_config(self) -> Result<ScanConfig, CliError> {
        let file = load(self.config.as_deref())?;
        let resolved = self.family.clone().or(&file).resolve(&SCAN_DEFAULTS)?;
        let quantity = self
            .quantity
            .or(file.quantity.clone())
            .map(|q| q.parse::<Quantity>())
            .transpose()
            .map_err(CliError::usage)?
            .unwrap_or(Quantity::Z);
        let u = resolved.unit_length;
        let rho = linspace(
            "rho",
            self.rho_min.or(file.rho_min).unwrap_or(0.0) * u,
            self.rho_max.or(file.rho_max).unwrap_or(30.0) * u,
            self.rho_count.or(file.rho_count).unwrap_or(601),
        )?;
        if rho.count < MIN_PROFILE_POINTS {
            return Err(CliError::Usage(format!(
                "rho grid has {} points, a profile needs at least {MIN_PROFILE_POINTS}",
                rho.count
            )));
        }
        if rho.start < 0.0 {
            return Err(CliError::Usage("rho must be non-negative".into()));
        }
        let mode = match self.derivative.or(file.derivative).unwrap_or(DerivativeArg::ClosedForm) {
            DerivativeArg::ClosedForm => DerivativeMode::ClosedForm,
            DerivativeArg::FiniteDifference => DerivativeMode::FiniteDifference,
            DerivativeArg::CrossCheck => DerivativeMode::CrossCheck,
        };
        let step = self.step.or(file.step).unwrap_or(DerivativeScheme::default().step);
        if !(step.is_finite() && step > 0.0) {
            return Err(CliError::Usage(format!("step = {step} must be positive")));
        }
        Ok(ScanConfig {
            resolved,
            quantity,
            rho,
            reference: self.reference.or(file.reference).unwrap_or(false),
            scheme: DerivativeScheme { step, mode },
            output: self.output.or(file.output),
        })
    }
}

/// Validated settings of an `(x, z)` surface, lengths in raw units.
#[derive(Debug, Clone)]
pub struct SurfaceConfig {
    pub resolved: Resolved,
    pub x: Linspace,
    pub z: Linspace,
    pub output: Option<PathBuf>,
}

impl SurfaceArgs {
    pub fn into_config(self) -> Result<SurfaceConfig, CliError> {
        if self.family.z.is_some() {
            return Err(CliError::Usage("a surface spans z; use --z-min and --z-max".into()));
        }
        let file = load(self.config.as_deref())?;
        let family = FamilyArgs { z: None, ..self.family.clone().or(&file) };
        let resolved = family.resolve(&SURFACE_DEFAULTS)?;
        let u = resolved.unit_length;
        let x = linspace(
            "x",
            self.x_min.or(file.x_min).unwrap_or(-66.0) * u,
            self.x_max.or(file.x_max).unwrap_or(66.0) * u,
            self.x_count.or(file.x_count).unwrap_or(133),
        )?;
        let z = linspace(
            "z",
            self.z_min.or(file.z_min).unwrap_or(-66.0) * u,
            self.z_max.or(file.z_max).unwrap_or(66.0) * u,
            self.z_count.or(file.z_count).unwrap_or(133),
        )?;
        Ok(SurfaceConfig {
            resolved,
            x,
            z,
            output: self.output.or(file.output),
        })
    }
}
