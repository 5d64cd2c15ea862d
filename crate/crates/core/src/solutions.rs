//! Closed-form localized solutions of the scalar wave equation.
//!
//! All three families are positive-frequency (analytic-signal) solutions of
//! `(d2/drho2 + (1/rho) d/drho + d2/dz2 - d2/dtau2) Psi = 0` with `tau = ct`:
//!
//! * the cylindrical tube pulse, a Bessel-`J0` packet with exponential
//!   spectrum and fixed axial wavenumber `k0`,
//! * the focused X wave, the same pulse seen from a frame moving along the
//!   axis with speed `beta`,
//! * the focus wave mode, a luminal packet with a Gaussian waist.

use crate::error::{Error, Result};
use crate::jet::{Jet, RHO, TAU, Z};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Scalar wave value. Normalization is relative (see [`Family::origin_modulus`]).
pub type ComplexAmplitude = Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Cylindrical spacetime coordinates `(rho, z, tau = ct)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimePoint {
    pub rho: f64,
    pub z: f64,
    pub tau: f64,
}

impl SpaceTimePoint {
    pub fn new(rho: f64, z: f64, tau: f64) -> Result<Self> {
        let p = Self { rho, z, tau };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.z.is_finite() && self.tau.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate in {self:?}")));
        }
        if self.rho < 0.0 {
            return Err(Error::InvalidPoint(format!("rho = {} is negative", self.rho)));
        }
        Ok(())
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParams(msg()))
    }
}

/// Parameters of the cylindrical tube pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylParams {
    k0: f64,
    delta: f64,
}

impl CylParams {
    pub fn new(k0: f64, delta: f64) -> Result<Self> {
        require(k0.is_finite() && k0 != 0.0, || {
            format!("k0 = {k0} must be finite and nonzero")
        })?;
        require(delta.is_finite() && delta > 0.0, || {
            format!("delta = {delta} must be finite and positive")
        })?;
        Ok(Self { k0, delta })
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Characteristic length `l = 1/|k0|`.
    pub fn length_scale(&self) -> f64 {
        1.0 / self.k0.abs()
    }
}

/// Parameters of the focused X wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FxwParams {
    k0: f64,
    delta: f64,
    beta: f64,
}

impl FxwParams {
    pub fn new(k0: f64, delta: f64, beta: f64) -> Result<Self> {
        let cyl = CylParams::new(k0, delta)?;
        check_beta(beta)?;
        Ok(Self {
            k0: cyl.k0,
            delta: cyl.delta,
            beta,
        })
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        lorentz_gamma(self.beta)
    }

    pub fn length_scale(&self) -> f64 {
        1.0 / self.k0.abs()
    }

    /// Wavelength `2 pi / |k0|`.
    pub fn lambda(&self) -> f64 {
        2.0 * PI / self.k0.abs()
    }

    /// The tube pulse this wave is a boosted copy of.
    pub fn rest_frame(&self) -> CylParams {
        CylParams {
            k0: self.k0,
            delta: self.delta,
        }
    }
}

/// Parameters of the focus wave mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FwmParams {
    l: f64,
    a: f64,
}

impl FwmParams {
    pub fn new(l: f64, a: f64) -> Result<Self> {
        require(l.is_finite() && l > 0.0, || format!("l = {l} must be finite and positive"))?;
        require(a.is_finite() && a > 0.0, || format!("a = {a} must be finite and positive"))?;
        Ok(Self { l, a })
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Waist radius scale `sqrt(l a)`.
    pub fn waist_scale(&self) -> f64 {
        (self.l * self.a).sqrt()
    }
}

fn check_beta(beta: f64) -> Result<()> {
    require(beta > 0.0 && beta < 1.0, || format!("beta = {beta} must lie in (0, 1)"))
}

fn lorentz_gamma(beta: f64) -> f64 {
    1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt()
}

/// Cylindrical tube pulse `exp(-|k0| w)/w * exp(i k0 z)`, `w = sqrt(rho^2 + (delta + i tau)^2)`.
pub fn eval_cyl(p: SpaceTimePoint, q: &CylParams) -> ComplexAmplitude {
    let s = Complex64::new(q.delta, p.tau);
    let w = (p.rho * p.rho + s * s).sqrt();
    (-q.k0.abs() * w).exp() / w * Complex64::from_polar(1.0, q.k0 * p.z)
}

/// Focused X wave, `w = sqrt(rho^2 + (delta - i gamma (beta z - tau))^2)`.
pub fn eval_fxw(p: SpaceTimePoint, q: &FxwParams) -> ComplexAmplitude {
    let gamma = q.gamma();
    let retarded = q.beta.mul_add(p.z, -p.tau);
    let s = Complex64::new(q.delta, -gamma * retarded);
    let w = (p.rho * p.rho + s * s).sqrt();
    let phase = gamma * q.k0 * (-q.beta).mul_add(p.tau, p.z);
    (-q.k0.abs() * w).exp() / w * Complex64::from_polar(1.0, phase)
}

/// Focus wave mode `exp[-rho^2 / (2 l (a - i(z - tau)))] / (a - i(z - tau)) * exp[-i (z + tau) / (2 l)]`.
pub fn eval_fwm(p: SpaceTimePoint, q: &FwmParams) -> ComplexAmplitude {
    let denom = Complex64::new(q.a, -(p.z - p.tau));
    let gauss = (-(p.rho * p.rho) / (2.0 * q.l * denom)).exp();
    gauss / denom * Complex64::from_polar(1.0, -(p.z + p.tau) / (2.0 * q.l))
}

/// Coordinates of `p` in a frame moving with speed `beta` along `+z`.
pub fn boost_map(p: SpaceTimePoint, beta: f64) -> Result<SpaceTimePoint> {
    check_beta(beta)?;
    Ok(boost(p, beta))
}

/// Inverse of [`boost_map`] (a boost by `-beta`).
pub fn unboost_map(p: SpaceTimePoint, beta: f64) -> Result<SpaceTimePoint> {
    check_beta(beta)?;
    Ok(boost(p, -beta))
}

fn boost(p: SpaceTimePoint, beta: f64) -> SpaceTimePoint {
    let gamma = lorentz_gamma(beta);
    SpaceTimePoint {
        rho: p.rho,
        z: gamma * (-beta).mul_add(p.tau, p.z),
        tau: gamma * (-beta).mul_add(p.z, p.tau),
    }
}

/// One of the three shipped solution families with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Cyl(CylParams),
    Fxw(FxwParams),
    Fwm(FwmParams),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cyl(_) => "cyl",
            Family::Fxw(_) => "fxw",
            Family::Fwm(_) => "fwm",
        }
    }

    pub fn psi(&self, p: SpaceTimePoint) -> ComplexAmplitude {
        match self {
            Family::Cyl(q) => eval_cyl(p, q),
            Family::Fxw(q) => eval_fxw(p, q),
            Family::Fwm(q) => eval_fwm(p, q),
        }
    }

    /// `|Psi(0, 0, 0)|`, the reference modulus for relative normalization.
    pub fn origin_modulus(&self) -> f64 {
        match self {
            Family::Cyl(q) => (-q.k0.abs() * q.delta).exp() / q.delta,
            Family::Fxw(q) => (-q.k0.abs() * q.delta).exp() / q.delta,
            Family::Fwm(q) => 1.0 / q.a,
        }
    }

    /// Characteristic length `l` of the family.
    pub fn length_scale(&self) -> f64 {
        match self {
            Family::Cyl(q) => q.length_scale(),
            Family::Fxw(q) => q.length_scale(),
            Family::Fwm(q) => q.l,
        }
    }

    /// Smallest length over which the solution varies appreciably in `tau`.
    pub fn local_scale(&self) -> f64 {
        match self {
            Family::Cyl(q) => q.delta.min(q.length_scale()),
            Family::Fxw(q) => q.delta.min(q.length_scale()) / q.gamma(),
            Family::Fwm(q) => q.a.min(q.l),
        }
    }

    /// Time-like coordinate that controls the lateral shape at `(z, tau)`:
    /// `tau` for the tube pulse, the rest-frame time `gamma (tau - beta z)` for
    /// the X wave and the distance from the waist `z - tau` for the focus wave mode.
    pub fn shape_time(&self, z: f64, tau: f64) -> f64 {
        match self {
            Family::Cyl(_) => tau,
            Family::Fxw(q) => q.gamma() * (-q.beta).mul_add(z, tau),
            Family::Fwm(_) => z - tau,
        }
    }

    /// Value with gradient and Hessian in `(rho, z, tau)`.
    pub(crate) fn jet(&self, p: SpaceTimePoint) -> Jet {
        let rho = Jet::variable(RHO, p.rho);
        let z = Jet::variable(Z, p.z);
        let tau = Jet::variable(TAU, p.tau);
        match self {
            Family::Cyl(q) => {
                let s = tau.scale(I) + Complex64::new(q.delta, 0.0);
                let phase = z.scale(I * q.k0).exp();
                bessel_packet_jet(rho, s, q.k0.abs()) * phase
            }
            Family::Fxw(q) => {
                let gamma = q.gamma();
                let retarded = z.scale((q.beta).into()) - tau;
                let s = retarded.scale(-I * gamma) + Complex64::new(q.delta, 0.0);
                let axial = z - tau.scale(q.beta.into());
                let phase = axial.scale(I * gamma * q.k0).exp();
                bessel_packet_jet(rho, s, q.k0.abs()) * phase
            }
            Family::Fwm(q) => {
                let denom = (z - tau).scale(-I) + Complex64::new(q.a, 0.0);
                let inv = denom.recip();
                let gauss = ((rho * rho) * inv).scale((-0.5 / q.l).into()).exp();
                let phase = (z + tau).scale(-I / (2.0 * q.l)).exp();
                gauss * inv * phase
            }
        }
    }
}

/// `exp(-kappa w)/w` with `w = sqrt(rho^2 + s^2)`.
fn bessel_packet_jet(rho: Jet, s: Jet, kappa: f64) -> Jet {
    let w = (rho * rho + s * s).sqrt();
    w.scale((-kappa).into()).exp().div(&w)
}
