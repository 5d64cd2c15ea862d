//! Exactly solvable localized wave packets and their photon energy densities.
//!
//! The crate evaluates three closed-form, positive-frequency solutions of the
//! scalar wave equation (a cylindrical tube pulse, the focused X wave and the
//! focus wave mode), builds the Riemann-Silberstein vector from a Hertz
//! superpotential directed along the axis, and provides the numerical tooling
//! used to check their lateral localization: spectral quadrature oracles,
//! log-space falloff fitting and finite-difference wave-equation residuals.
//!
//! Lengths are dimensionless. For the cylindrical pulse and the focused X wave
//! the natural unit is `l = 1/|k0|`; the focus wave mode carries its own `l`.

pub mod diagnostics;
pub mod error;
pub mod fields;
pub mod grid;
mod jet;
pub mod solutions;
pub mod spectra;
pub mod suites;

pub use error::{Error, Result};
pub use num_complex::Complex64;
