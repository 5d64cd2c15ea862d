//! Property tests of the closed forms and the falloff classifier.

use photoloc::diagnostics::{fit_falloff, FalloffModel, ProfileMeta, RadialProfile};
use photoloc::grid::Linspace;
use photoloc::solutions::{boost_map, eval_cyl, eval_fwm, eval_fxw, FwmParams, FxwParams, SpaceTimePoint};
use photoloc::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Boosted tube pulse written out independently of the library's boost.
fn boosted_cyl(rho: f64, z: f64, tau: f64, k0: f64, delta: f64, beta: f64) -> Complex64 {
    let gamma = 1.0 / (1.0 - beta * beta).sqrt();
    let zp = gamma * (z - beta * tau);
    let tp = gamma * (tau - beta * z);
    let s = Complex64::new(delta, tp);
    let w = (rho * rho + s * s).sqrt();
    (-k0.abs() * w).exp() / w * Complex64::new(0.0, k0 * zp).exp()
}

fn profile(rho: &[f64], f: impl Fn(f64) -> f64) -> RadialProfile {
    let meta = ProfileMeta {
        family: None,
        quantity: None,
        z: 0.0,
        tau: 0.0,
    };
    RadialProfile::new(rho.to_vec(), rho.iter().map(|&r| f(r)).collect(), meta).unwrap()
}

fn noisy(rho: &[f64], seed: u64, f: impl Fn(f64) -> f64) -> RadialProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = rho.iter().map(|_| 1.0 + 0.01 * rng.random_range(-1.0..1.0)).collect();
    let meta = ProfileMeta {
        family: None,
        quantity: None,
        z: 0.0,
        tau: 0.0,
    };
    RadialProfile::new(rho.to_vec(), rho.iter().zip(&noise).map(|(&r, n)| f(r) * n).collect(), meta).unwrap()
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    Linspace::new(a, b, n).unwrap().points()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lorentz_identity(
        rho in 0.0..20.0f64,
        z in -20.0..20.0f64,
        tau in -20.0..20.0f64,
        k0 in prop_oneof![-3.0..-0.2f64, 0.2..3.0f64],
        delta in 0.05..3.0f64,
        beta in 0.01..0.999f64,
    ) {
        let q = FxwParams::new(k0, delta, beta).unwrap();
        let p = SpaceTimePoint::new(rho, z, tau).unwrap();
        let norm = (-k0.abs() * delta).exp() / delta;
        let library = eval_cyl(boost_map(p, beta).unwrap(), &q.rest_frame());
        prop_assert!((eval_fxw(p, &q) - library).norm() <= 1e-12 * norm);
        prop_assert!((eval_fxw(p, &q) - boosted_cyl(rho, z, tau, k0, delta, beta)).norm() <= 1e-12 * norm);
    }

    #[test]
    fn x_wave_moves_rigidly(
        rho in 0.0..10.0f64,
        z in -5.0..5.0f64,
        tau in -5.0..5.0f64,
        cycles in -1.0e3..1.0e3f64,
        beta in 0.3..0.99f64,
    ) {
        let q = FxwParams::new(1.0, 1.0, beta).unwrap();
        let d = cycles * q.lambda();
        let a = eval_fxw(SpaceTimePoint::new(rho, z, tau).unwrap(), &q).norm();
        let b = eval_fxw(SpaceTimePoint::new(rho, z + d / beta, tau + d).unwrap(), &q).norm();
        let norm = (-1.0f64).exp();
        prop_assert!((a - b).abs() <= 1e-12 * norm, "{a} vs {b}");
    }

    #[test]
    fn focus_wave_mode_moves_rigidly(
        rho in 0.0..6.0f64,
        z in -5.0..5.0f64,
        tau in -5.0..5.0f64,
        d in -1.0e3..1.0e3f64,
    ) {
        let q = FwmParams::new(1.0, 1.0).unwrap();
        let a = eval_fwm(SpaceTimePoint::new(rho, z, tau).unwrap(), &q).norm();
        let b = eval_fwm(SpaceTimePoint::new(rho, z + d, tau + d).unwrap(), &q).norm();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn recovers_noisy_exponential(rate in 0.2..2.0f64, q in -2.0..2.0f64, seed: u64) {
        let p = noisy(&grid(5.0, 25.0, 201), seed, |r| r.powf(q) * (-rate * r).exp());
        let fit = fit_falloff(&p, [5.0, 25.0]).unwrap();
        prop_assert_eq!(fit.model, FalloffModel::Exponential);
        prop_assert!((fit.rate - rate).abs() <= 0.05 * rate);
    }

    #[test]
    fn recovers_noisy_gaussian(rate in 0.2..2.0f64, q in -2.0..6.0f64, seed: u64) {
        let p = noisy(&grid(2.0, 8.0, 121), seed, |r| r.powf(q) * (-rate * r * r).exp());
        let fit = fit_falloff(&p, [2.0, 8.0]).unwrap();
        prop_assert_eq!(fit.model, FalloffModel::Gaussian);
        prop_assert!((fit.rate - rate).abs() <= 0.05 * rate);
    }

    #[test]
    fn recovers_noisy_power(p_exp in 0.5..5.0f64, seed: u64) {
        let p = noisy(&grid(2.0, 50.0, 200), seed, |r| r.powf(-p_exp));
        let fit = fit_falloff(&p, [2.0, 50.0]).unwrap();
        prop_assert_eq!(fit.model, FalloffModel::Power);
        prop_assert!((fit.rate - p_exp).abs() <= 0.05 * p_exp);
    }

    #[test]
    fn gaussian_decay_is_never_power(rate in 0.01..3.0f64, q in -3.0..6.0f64, lo in 1.0..5.0f64) {
        let rho = grid(lo, lo + 10.0, 101);
        let p = profile(&rho, |r| r.powf(q) * (-rate * r * r).exp());
        let fit = fit_falloff(&p, [lo, lo + 10.0]).unwrap();
        prop_assert_ne!(fit.model, FalloffModel::Power);
    }

    #[test]
    fn power_decay_is_never_exponential(p_exp in 0.1..8.0f64, lo in 1.0..10.0f64, width in 5.0..100.0f64) {
        let rho = grid(lo, lo + width, 101);
        let p = profile(&rho, |r| r.powf(-p_exp));
        let fit = fit_falloff(&p, [lo, lo + width]).unwrap();
        prop_assert_eq!(fit.model, FalloffModel::Power);
    }
}
