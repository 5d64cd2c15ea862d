//! Falloff fits of the closed forms inside their asymptotic regime.

use photoloc::diagnostics::{fit_in_regime, radial_profile, residual_order, FalloffModel, Quantity};
use photoloc::fields::DerivativeScheme;
use photoloc::grid::Linspace;
use photoloc::solutions::{CylParams, Family, FwmParams, FxwParams, SpaceTimePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn x_wave_waist_plane_falloff_persists() {
    let q = FxwParams::new(1.0, 0.1, 0.8).unwrap();
    let family = Family::Fxw(q);
    let rho = Linspace::new(0.0, 30.0, 601).unwrap().points();
    let rates: Vec<f64> = [0.0, 50.0, 500.0]
        .iter()
        .map(|cycles| {
            let tau = cycles * q.lambda();
            let profile = radial_profile(&family, Quantity::Z, tau / q.beta(), tau, &rho, &DerivativeScheme::default()).unwrap();
            let fit = fit_in_regime(&profile, &family).unwrap();
            assert_eq!(fit.model, FalloffModel::Exponential);
            fit.rate
        })
        .collect();
    for r in &rates {
        assert!((r - rates[0]).abs() <= 0.02 * rates[0], "{rates:?}");
        assert!((r - 1.0).abs() <= 0.02);
    }
}

#[test]
fn tube_pulse_off_waist_stays_exponential() {
    let family = Family::Cyl(CylParams::new(1.0, 0.1).unwrap());
    let rho = Linspace::new(0.0, 30.0, 601).unwrap().points();
    let profile = radial_profile(&family, Quantity::Z, 0.0, 2.5, &rho, &DerivativeScheme::default()).unwrap();
    let fit = fit_in_regime(&profile, &family).unwrap();
    assert_eq!(fit.window[0], 12.5);
    assert_eq!(fit.model, FalloffModel::Exponential);
}

#[test]
fn wave_residual_is_second_order() {
    let families = [
        Family::Cyl(CylParams::new(1.0, 1.0).unwrap()),
        Family::Fxw(FxwParams::new(-1.0, 1.0, 0.9).unwrap()),
        Family::Fwm(FwmParams::new(1.0, 1.0).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for family in &families {
        for _ in 0..20 {
            let p = SpaceTimePoint::new(
                rng.random_range(0.5..3.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            )
            .unwrap();
            let order = residual_order(family, p, 0.02).unwrap();
            assert!((order - 2.0).abs() <= 0.2, "{} at {p:?}: order {order}", family.name());
        }
    }
}
