//! Superpotential `Z = m Psi z_hat` and the Riemann-Silberstein vector
//! `F = curl[i dZ/dtau + curl Z]`.
//!
//! For an axisymmetric `Psi` and `m` along the axis the double curl reduces to
//!
//! ```text
//! F = (d2Psi/drho dz) rho_hat - i (d2Psi/drho dtau) phi_hat - (1/rho) d/drho(rho dPsi/drho) z_hat
//! ```
//!
//! since `curl(Psi z_hat) = -dPsi/drho phi_hat` and
//! `curl curl(Psi z_hat) = grad(dPsi/dz) - z_hat laplacian(Psi)`.
//! `m` is fixed so that `|Z(0, 0, 0)| = 1`.

use crate::error::{Error, Result};
use crate::jet::{Jet, RHO, TAU, Z};
use crate::solutions::{ComplexAmplitude, Family, SpaceTimePoint};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative agreement required between the two derivative paths in cross-check mode.
pub const DTAU_CROSS_CHECK_TOL: f64 = 1e-8;
pub const RS_CROSS_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    ClosedForm,
    FiniteDifference,
    /// Evaluates both paths, fails on disagreement and returns the closed form.
    CrossCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeScheme {
    /// Finite-difference step relative to the family's local length scale.
    pub step: f64,
    pub mode: DerivativeMode,
}

impl Default for DerivativeScheme {
    fn default() -> Self {
        Self {
            step: 1e-3,
            mode: DerivativeMode::ClosedForm,
        }
    }
}

impl DerivativeScheme {
    pub fn closed_form() -> Self {
        Self::default()
    }

    pub fn finite_difference(step: f64) -> Self {
        Self {
            step,
            mode: DerivativeMode::FiniteDifference,
        }
    }

    pub fn cross_check() -> Self {
        Self {
            mode: DerivativeMode::CrossCheck,
            ..Self::default()
        }
    }
}

/// Components of `F` in the cylindrical basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RSVector {
    pub f_rho: Complex64,
    pub f_phi: Complex64,
    pub f_z: Complex64,
}

impl RSVector {
    pub fn norm_sqr(&self) -> f64 {
        self.f_rho.norm_sqr() + self.f_phi.norm_sqr() + self.f_z.norm_sqr()
    }

    fn scale(self, c: f64) -> Self {
        Self {
            f_rho: self.f_rho * c,
            f_phi: self.f_phi * c,
            f_z: self.f_z * c,
        }
    }

    fn distance(&self, other: &Self) -> f64 {
        ((self.f_rho - other.f_rho).norm_sqr()
            + (self.f_phi - other.f_phi).norm_sqr()
            + (self.f_z - other.f_z).norm_sqr())
        .sqrt()
    }

    fn from_jet(jet: &Jet, rho: f64) -> Self {
        Self {
            f_rho: jet.h[RHO][Z],
            f_phi: -I * jet.h[RHO][TAU],
            f_z: -jet.transverse_laplacian(rho),
        }
    }
}

fn normalization(family: &Family) -> f64 {
    1.0 / family.origin_modulus()
}

/// `Z` along the axis direction, normalized to unit modulus at the origin.
pub fn superpotential(p: SpaceTimePoint, family: &Family) -> Result<ComplexAmplitude> {
    p.validate()?;
    Ok(family.psi(p) * normalization(family))
}

pub fn dtau_superpotential(
    p: SpaceTimePoint,
    family: &Family,
    scheme: &DerivativeScheme,
) -> Result<ComplexAmplitude> {
    p.validate()?;
    let closed = || family.jet(p).d[TAU];
    let raw = match scheme.mode {
        DerivativeMode::ClosedForm => closed(),
        DerivativeMode::FiniteDifference => Stencil::new(family, p, scheme.step)?.dtau(),
        DerivativeMode::CrossCheck => {
            let exact = closed();
            let fd = Stencil::new(family, p, scheme.step)?.dtau();
            check_agreement((fd - exact).norm(), exact.norm(), DTAU_CROSS_CHECK_TOL)?;
            exact
        }
    };
    Ok(raw * normalization(family))
}

pub fn rs_vector(p: SpaceTimePoint, family: &Family, scheme: &DerivativeScheme) -> Result<RSVector> {
    p.validate()?;
    let closed = || RSVector::from_jet(&family.jet(p), p.rho);
    let raw = match scheme.mode {
        DerivativeMode::ClosedForm => closed(),
        DerivativeMode::FiniteDifference => Stencil::new(family, p, scheme.step)?.rs_vector(),
        DerivativeMode::CrossCheck => {
            let exact = closed();
            let fd = Stencil::new(family, p, scheme.step)?.rs_vector();
            check_agreement(fd.distance(&exact), exact.norm_sqr().sqrt(), RS_CROSS_CHECK_TOL)?;
            exact
        }
    };
    Ok(raw.scale(normalization(family)))
}

/// `|F|^2`, relative to the normalization `|Z(0, 0, 0)| = 1`.
pub fn energy_density(p: SpaceTimePoint, family: &Family, scheme: &DerivativeScheme) -> Result<f64> {
    rs_vector(p, family, scheme).map(|f| f.norm_sqr())
}

fn check_agreement(deviation: f64, scale: f64, tol: f64) -> Result<()> {
    let rel = if scale > 0.0 { deviation / scale } else { deviation };
    if rel <= tol {
        Ok(())
    } else {
        Err(Error::CrossCheckMismatch { deviation: rel })
    }
}

/// Central differences of `Psi` with one Richardson step; `Psi` is extended
/// evenly to negative `rho`, which is exact for these axisymmetric solutions.
struct Stencil<'a> {
    family: &'a Family,
    p: SpaceTimePoint,
    h: f64,
}

impl<'a> Stencil<'a> {
    fn new(family: &'a Family, p: SpaceTimePoint, rel_step: f64) -> Result<Self> {
        let scale = family.local_scale();
        let h = rel_step * scale;
        let coord = p.rho.abs().max(p.z.abs()).max(p.tau.abs()).max(scale);
        // the half step must still move every coordinate by many ulps
        if !(h.is_finite() && h > 0.0) || 0.5 * h < 64.0 * f64::EPSILON * coord {
            return Err(Error::StepUnderflow { step: h, scale: coord });
        }
        Ok(Self { family, p, h })
    }

    fn psi(&self, drho: f64, dz: f64, dtau: f64) -> Complex64 {
        self.family.psi(SpaceTimePoint {
            rho: (self.p.rho + drho).abs(),
            z: self.p.z + dz,
            tau: self.p.tau + dtau,
        })
    }

    fn richardson<F: Fn(f64) -> Complex64>(&self, d: F) -> Complex64 {
        (4.0 * d(0.5 * self.h) - d(self.h)) / 3.0
    }

    fn dtau(&self) -> Complex64 {
        self.richardson(|h| (self.psi(0.0, 0.0, h) - self.psi(0.0, 0.0, -h)) / (2.0 * h))
    }

    fn mixed_rho(&self, axis: usize) -> Complex64 {
        let shift = |dr: f64, d: f64| match axis {
            Z => self.psi(dr, d, 0.0),
            _ => self.psi(dr, 0.0, d),
        };
        self.richardson(|h| {
            (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) / (4.0 * h * h)
        })
    }

    fn transverse_laplacian(&self) -> Complex64 {
        let center = self.psi(0.0, 0.0, 0.0);
        let d2 = self.richardson(|h| {
            (self.psi(h, 0.0, 0.0) - 2.0 * center + self.psi(-h, 0.0, 0.0)) / (h * h)
        });
        if self.p.rho == 0.0 {
            return 2.0 * d2;
        }
        let d1 = self.richardson(|h| (self.psi(h, 0.0, 0.0) - self.psi(-h, 0.0, 0.0)) / (2.0 * h));
        d2 + d1 / self.p.rho
    }

    fn rs_vector(&self) -> RSVector {
        RSVector {
            f_rho: self.mixed_rho(Z),
            f_phi: -I * self.mixed_rho(TAU),
            f_z: -self.transverse_laplacian(),
        }
    }
}
