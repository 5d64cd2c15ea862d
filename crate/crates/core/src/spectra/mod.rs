//! Spectral representations used as independent oracles for the closed forms.
//!
//! * [`quad_cyl`] integrates the Bessel-`J0` packet whose closed form is
//!   [`crate::solutions::eval_cyl`].
//! * [`packet_1d`] is a one-dimensional positive-frequency packet (an analytic signal).
//! * [`spherical_standing`] superposes spherically symmetric standing waves
//!   `sin(kr)/r` with a one-sided spectrum.
//!
//! Wavenumbers in the last two are dimensionless (`kappa = l k`, lengths in units of `l`).

mod bessel;
mod quadrature;

pub use bessel::bessel_j0;
pub use quadrature::Estimate;

use crate::error::{Error, Result};
use crate::solutions::{CylParams, SpaceTimePoint};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Panels per oscillation period of the integrand.
const PANELS_PER_PERIOD: f64 = 8.0;
const MIN_PANELS: usize = 16;

/// Tolerances and budget for the adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Spectra are truncated where their weight drops below `exp(-k_max_margin)`.
    pub k_max_margin: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-15,
            max_subdivisions: 400_000,
            k_max_margin: 45.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol >= 0.0
            && self.max_subdivisions >= 1
            && self.k_max_margin > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("invalid quadrature spec {self:?}")))
        }
    }
}

/// Built-in one-sided spectral weights `h(kappa)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpectrumKind {
    /// `exp(-kappa * delta)`, `delta` in units of `l`.
    Exponential { delta: f64 },
    /// `kappa * exp(-kappa^2 / 2)`.
    GaussianOdd,
}

/// A spectral weight `kappa^moment * h(kappa)` on `kappa >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub moment: u32,
}

impl Spectrum {
    pub fn exponential(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidParams(format!(
                "exponential spectrum needs delta > 0, got {delta}"
            )));
        }
        Ok(Self {
            kind: SpectrumKind::Exponential { delta },
            moment: 0,
        })
    }

    pub fn gaussian_odd() -> Self {
        Self {
            kind: SpectrumKind::GaussianOdd,
            moment: 0,
        }
    }

    /// The spectrum multiplied by `kappa` (one `tau`-derivative, up to `-i`).
    pub fn times_k(self) -> Self {
        Self {
            moment: self.moment + 1,
            ..self
        }
    }

    pub fn weight(&self, kappa: f64) -> f64 {
        let base = match self.kind {
            SpectrumKind::Exponential { delta } => (-kappa * delta).exp(),
            SpectrumKind::GaussianOdd => kappa * (-0.5 * kappa * kappa).exp(),
        };
        base * kappa.powi(self.moment as i32)
    }

    /// Truncation point beyond which the weight stays below `exp(-margin)`.
    fn cutoff(&self, margin: f64) -> f64 {
        let m = self.moment as f64;
        let mut k: f64 = 1.0;
        for _ in 0..32 {
            k = match self.kind {
                SpectrumKind::Exponential { delta } => (margin + m * k.max(1.0).ln()) / delta,
                SpectrumKind::GaussianOdd => (2.0 * (margin + (m + 1.0) * k.max(1.0).ln())).sqrt(),
            };
        }
        k
    }
}

fn integrate_spectrum<F>(
    integrand: F,
    upper: f64,
    oscillation: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    let width = if oscillation > 0.0 {
        2.0 * PI / (PANELS_PER_PERIOD * oscillation)
    } else {
        f64::INFINITY
    };
    let breaks = quadrature::partition(0.0, upper, MIN_PANELS, |_| width);
    quadrature::integrate(
        integrand,
        &breaks,
        spec.rel_tol,
        spec.abs_tol,
        spec.max_subdivisions,
    )
}

/// Bessel-packet integral
/// `int_{|k0|}^inf dk J0(k_rho rho) e^{-k delta} e^{-i (k tau - k0 z)}`, `k_rho = sqrt(k^2 - k0^2)`.
///
/// The upper limit is `|k0| + k_max_margin / delta`. Panels are laid out
/// uniformly in `k_rho` so that each covers at most 1/8 of a `J0` period
/// (`2 pi / rho`) and 1/8 of a period of `e^{-i k tau}`.
pub fn quad_cyl(p: SpaceTimePoint, q: &CylParams, spec: &QuadratureSpec) -> Result<Estimate> {
    p.validate()?;
    spec.validate()?;
    let kappa = q.k0().abs();
    let delta = q.delta();
    let upper = kappa + spec.k_max_margin / delta;
    let s = Complex64::new(delta, p.tau);

    let krho_max = (upper * upper - kappa * kappa).sqrt();
    let krho_step = if p.rho > 0.0 {
        2.0 * PI / (PANELS_PER_PERIOD * p.rho)
    } else {
        f64::INFINITY
    };
    let tau_step = if p.tau != 0.0 {
        2.0 * PI / (PANELS_PER_PERIOD * p.tau.abs())
    } else {
        f64::INFINITY
    };
    let krho_step = krho_step.min(krho_max / MIN_PANELS as f64);
    let mut breaks = vec![kappa];
    let mut krho = 0.0;
    let mut k = kappa;
    while k < upper {
        krho = (krho + krho_step).min(krho_max);
        let next = (krho * krho + kappa * kappa).sqrt().min(k + tau_step).min(upper);
        krho = (next * next - kappa * kappa).max(0.0).sqrt();
        k = if upper - next < 1e-12 * upper { upper } else { next };
        breaks.push(k);
    }

    let integrand = |k: f64| {
        let krho = ((k - kappa) * (k + kappa)).max(0.0).sqrt();
        bessel_j0(krho * p.rho) * (-k * s).exp()
    };
    let mut est = quadrature::integrate(
        integrand,
        &breaks,
        spec.rel_tol,
        spec.abs_tol,
        spec.max_subdivisions,
    )?;
    est.value *= Complex64::from_polar(1.0, q.k0() * p.z);
    est.error += (-upper * delta).exp() / delta;
    Ok(est)
}

/// One-dimensional positive-frequency packet
/// `(1/2pi) int_0^inf dk f(k) e^{i k x}` at co-moving coordinate `x = z - tau`.
pub fn packet_1d(x: f64, spectrum: &Spectrum, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    let upper = spectrum.cutoff(spec.k_max_margin);
    let mut est = integrate_spectrum(
        |k| Complex64::from_polar(spectrum.weight(k), k * x),
        upper,
        x.abs(),
        spec,
    )?;
    est.value /= 2.0 * PI;
    est.error /= 2.0 * PI;
    Ok(est)
}

/// Superposition of spherical standing waves
/// `int_0^inf dk h(k) (sin(k r)/r) e^{-i k tau}`; at `r = 0` the kernel is its limit `k`.
pub fn spherical_standing(
    r: f64,
    tau: f64,
    spectrum: &Spectrum,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if !(r.is_finite() && r >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidPoint(format!("r = {r}, tau = {tau}")));
    }
    let upper = spectrum.cutoff(spec.k_max_margin);
    let kernel = |k: f64| {
        if r == 0.0 {
            k
        } else {
            (k * r).sin() / r
        }
    };
    integrate_spectrum(
        |k| Complex64::from_polar(spectrum.weight(k) * kernel(k), -k * tau),
        upper,
        r.max(tau.abs()),
        spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::eval_cyl;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn quad_cyl_on_axis_is_elementary() {
        let q = CylParams::new(1.0, 0.1).unwrap();
        let p = SpaceTimePoint::new(0.0, 0.0, 0.0).unwrap();
        let est = quad_cyl(p, &q, &spec()).unwrap();
        let exact = 10.0 * (-0.1f64).exp();
        assert!((est.value.re - exact).abs() < 1e-12 * exact);
        assert!(est.value.im.abs() < 1e-12);
    }

    #[test]
    fn quad_cyl_matches_closed_form_off_axis() {
        for k0 in [1.0, -1.0] {
            let q = CylParams::new(k0, 0.1).unwrap();
            for (rho, z, tau) in [(5.0, 1.0, 2.0), (10.0, 0.0, 0.0)] {
                let p = SpaceTimePoint::new(rho, z, tau).unwrap();
                let est = quad_cyl(p, &q, &spec()).unwrap();
                let exact = eval_cyl(p, &q);
                let dev = (est.value - exact).norm();
                assert!(dev <= 1e-8 * exact.norm(), "rho={rho}: {dev:e} vs |Psi|={:e}", exact.norm());
            }
        }
    }

    #[test]
    fn packet_1d_exponential_closed_form() {
        let sp = Spectrum::exponential(1.0).unwrap();
        let at0 = packet_1d(0.0, &sp, &spec()).unwrap();
        assert!((at0.value.re - 1.0 / (2.0 * PI)).abs() < 1e-14);
        for x in [-37.0, -2.0, 0.5, 9.0, 100.0] {
            let exact = 1.0 / (2.0 * PI * Complex64::new(1.0, -x));
            let v = packet_1d(x, &sp, &spec()).unwrap().value;
            assert!((v - exact).norm() <= 1e-10 * exact.norm(), "x = {x}");
        }
    }

    #[test]
    fn spherical_exponential_closed_form() {
        let sp = Spectrum::exponential(1.0).unwrap();
        let v = spherical_standing(1.0, 0.0, &sp, &spec()).unwrap().value;
        assert!((v.re - 0.5).abs() < 1e-12 && v.im.abs() < 1e-12);
        let at_axis = spherical_standing(0.0, 0.0, &sp, &spec()).unwrap().value;
        assert!((at_axis.re - 1.0).abs() < 1e-12);
        for (r, tau) in [(3.0, -2.0), (40.0, 7.0), (100.0, 10.0)] {
            let p = Complex64::new(1.0, tau);
            let exact = 1.0 / (p * p + r * r);
            let v = spherical_standing(r, tau, &sp, &spec()).unwrap().value;
            assert!((v - exact).norm() <= 1e-10 * exact.norm(), "r={r} tau={tau}");
        }
    }

    #[test]
    fn spherical_gaussian_odd_sine_transform() {
        // int_0^inf k e^{-k^2/2} sin(kr) dk = sqrt(pi/2) r e^{-r^2/2}
        let sp = Spectrum::gaussian_odd();
        for r in [0.5, 1.0, 2.0, 4.0] {
            let v = spherical_standing(r, 0.0, &sp, &spec()).unwrap().value;
            let exact = (PI / 2.0).sqrt() * (-0.5 * r * r).exp();
            assert!((v.re - exact).abs() < 1e-12, "r = {r}");
            assert!(v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn spectrum_cutoff_reaches_margin() {
        for sp in [
            Spectrum::exponential(0.1).unwrap(),
            Spectrum::gaussian_odd(),
            Spectrum::gaussian_odd().times_k(),
            Spectrum::exponential(2.0).unwrap().times_k(),
        ] {
            let k = sp.cutoff(45.0);
            assert!(sp.weight(k) <= (-44.9f64).exp(), "{sp:?}");
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(Spectrum::exponential(0.0).is_err());
        let bad = QuadratureSpec {
            rel_tol: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(packet_1d(0.0, &Spectrum::gaussian_odd(), &bad).is_err());
        assert!(spherical_standing(-1.0, 0.0, &Spectrum::gaussian_odd(), &spec()).is_err());
    }
}
