//! Second-order forward-mode differentiation over complex values.
//!
//! A [`Jet`] carries a value together with its gradient and Hessian with
//! respect to the three cylindrical coordinates `(rho, z, tau)`. The shipped
//! solutions are compositions of `+ - * /`, `exp` and `sqrt`, so propagating
//! jets gives their derivatives exactly up to rounding.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

pub(crate) const RHO: usize = 0;
pub(crate) const Z: usize = 1;
pub(crate) const TAU: usize = 2;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Jet {
    pub v: Complex64,
    pub d: [Complex64; 3],
    pub h: [[Complex64; 3]; 3],
}

impl Jet {
    pub fn constant(v: Complex64) -> Self {
        Self {
            v,
            d: [ZERO; 3],
            h: [[ZERO; 3]; 3],
        }
    }

    pub fn variable(index: usize, value: f64) -> Self {
        let mut jet = Self::constant(Complex64::new(value, 0.0));
        jet.d[index] = Complex64::new(1.0, 0.0);
        jet
    }

    /// Applies a scalar function given its value and first two derivatives at `self.v`.
    fn chain(&self, f0: Complex64, f1: Complex64, f2: Complex64) -> Self {
        let mut out = Self::constant(f0);
        for i in 0..3 {
            out.d[i] = f1 * self.d[i];
            for j in 0..3 {
                out.h[i][j] = f2 * self.d[i] * self.d[j] + f1 * self.h[i][j];
            }
        }
        out
    }

    pub fn exp(&self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    /// Principal branch square root.
    pub fn sqrt(&self) -> Self {
        let s = self.v.sqrt();
        let d1 = 0.5 / s;
        let d2 = -0.5 * d1 / self.v;
        self.chain(s, d1, d2)
    }

    pub fn recip(&self) -> Self {
        let r = 1.0 / self.v;
        let r2 = r * r;
        self.chain(r, -r2, 2.0 * r2 * r)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = *self;
        out.v *= c;
        for i in 0..3 {
            out.d[i] *= c;
            for j in 0..3 {
                out.h[i][j] *= c;
            }
        }
        out
    }

    pub fn div(&self, rhs: &Jet) -> Self {
        *self * rhs.recip()
    }

    /// `(1/rho) d/drho (rho dPsi/drho)`, using the axis limit `2 d2Psi/drho2` at `rho = 0`.
    pub fn transverse_laplacian(&self, rho: f64) -> Complex64 {
        if rho == 0.0 {
            2.0 * self.h[RHO][RHO]
        } else {
            self.h[RHO][RHO] + self.d[RHO] / rho
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        self.v += rhs.v;
        for i in 0..3 {
            self.d[i] += rhs.d[i];
            for j in 0..3 {
                self.h[i][j] += rhs.h[i][j];
            }
        }
        self
    }
}

impl Add<Complex64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Complex64) -> Jet {
        self.v += rhs;
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = Jet::constant(self.v * rhs.v);
        for i in 0..3 {
            out.d[i] = self.d[i] * rhs.v + self.v * rhs.d[i];
            for j in 0..3 {
                out.h[i][j] = self.h[i][j] * rhs.v
                    + self.d[i] * rhs.d[j]
                    + self.d[j] * rhs.d[i]
                    + self.v * rhs.h[i][j];
            }
        }
        out
    }
}
