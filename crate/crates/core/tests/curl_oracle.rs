//! The cylindrical reduction of `F = curl[i dZ/dtau + curl Z]` against a
//! brute-force Cartesian evaluation by nested central differences.

use photoloc::fields::{rs_vector, superpotential, DerivativeScheme};
use photoloc::solutions::{CylParams, Family, FwmParams, FxwParams, SpaceTimePoint};
use photoloc::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Stencil step, in units of `l`.
const H: f64 = 1e-3;

/// Normalized `Psi` at Cartesian `(x, y, z, tau)`.
fn psi(family: &Family, v: [f64; 4]) -> Complex64 {
    let p = SpaceTimePoint::new(v[0].hypot(v[1]), v[2], v[3]).unwrap();
    superpotential(p, family).unwrap()
}

/// `d2 Psi / dv_i dv_j` by central differences with step `h`.
fn second(family: &Family, v: [f64; 4], i: usize, j: usize, h: f64) -> Complex64 {
    let at = |di: f64, dj: f64| {
        let mut w = v;
        w[i] += di;
        w[j] += dj;
        psi(family, w)
    };
    if i == j {
        (at(h, 0.0) - 2.0 * psi(family, v) + at(-h, 0.0)) / (h * h)
    } else {
        (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h)
    }
}

/// Cartesian components of `F` for `Z = Psi z_hat`.
fn cartesian_f(family: &Family, v: [f64; 4], h: f64) -> [Complex64; 3] {
    let (x, y, z, t) = (0, 1, 2, 3);
    let d = |i, j| second(family, v, i, j, h);
    [
        d(x, z) + I * d(y, t),
        d(y, z) - I * d(x, t),
        -(d(x, x) + d(y, y)),
    ]
}

#[test]
fn cylindrical_reduction_matches_cartesian_double_curl() {
    let families = [
        Family::Cyl(CylParams::new(1.0, 1.0).unwrap()),
        Family::Fxw(FxwParams::new(1.0, 1.0, 0.8).unwrap()),
        Family::Fwm(FwmParams::new(1.0, 1.0).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for family in &families {
        for _ in 0..20 {
            let rho: f64 = rng.random_range(0.2..3.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let z = rng.random_range(-2.0..2.0);
            let tau = rng.random_range(-2.0..2.0);
            let v = [rho * phi.cos(), rho * phi.sin(), z, tau];
            let rs = rs_vector(SpaceTimePoint::new(rho, z, tau).unwrap(), family, &DerivativeScheme::closed_form()).unwrap();
            let scale = rs.norm_sqr().sqrt();
            let deviation = |f: [Complex64; 3]| {
                let f_rho = f[0] * phi.cos() + f[1] * phi.sin();
                let f_phi = -f[0] * phi.sin() + f[1] * phi.cos();
                [(rs.f_rho, f_rho), (rs.f_phi, f_phi), (rs.f_z, f[2])]
                    .iter()
                    .map(|(got, want)| (got - want).norm() / scale)
                    .fold(0.0, f64::max)
            };
            let coarse = cartesian_f(family, v, H);
            let fine = cartesian_f(family, v, H / 2.0);
            // one Richardson step removes the h^2 truncation of the stencils
            let extrapolated: Vec<Complex64> = coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect();
            let dev = deviation([extrapolated[0], extrapolated[1], extrapolated[2]]);
            assert!(dev < 1e-6, "{} at {v:?}: deviation {dev:e}", family.name());

            // what remains against the plain stencils is their own O(h^2) error
            let ratio = deviation(coarse) / deviation(fine);
            assert!((ratio - 4.0).abs() < 0.5, "{} at {v:?}: ratio {ratio}", family.name());
        }
    }
}
