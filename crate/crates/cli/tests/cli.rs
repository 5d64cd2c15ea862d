use photoloc::diagnostics::{fit_falloff, radial_profile, FalloffFit, FalloffModel, Quantity};
use photoloc::fields::DerivativeScheme;
use photoloc::grid::Linspace;
use photoloc::solutions::{CylParams, Family};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn photoloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photoloc")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn parse_fit(out: &Output) -> FalloffFit {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn scan_schema() {
    let out = photoloc(&["scan", "--reference"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rho,modulus,log10_modulus,reference");
    assert_eq!(lines.len(), 602);
    assert_eq!(lines[1], "0.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0");
    let last: Vec<f64> = lines[601].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 30.0);
    assert!((last[3] - (-30.0f64).exp()).abs() <= 1e-16 * last[3]);
}

#[test]
fn scan_is_byte_identical_across_runs() {
    for args in [
        &["scan"][..],
        &["scan", "--family", "fxw", "--tau", "2.5", "--quantity", "dtauZ"],
        &["surface", "--x-count", "21", "--z-count", "21"],
        &["verify", "invariance", "--seed", "3"],
    ] {
        let a = photoloc(args);
        let b = photoloc(args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn scan_then_fit_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("a.csv");
    assert_eq!(code(&photoloc(&["scan", "-o", path_str(&csv)])), 0);
    let cli = parse_fit(&photoloc(&["fit", path_str(&csv), "--window-min", "5", "--window-max", "25"]));

    let family = Family::Cyl(CylParams::new(1.0, 0.1).unwrap());
    let rho = Linspace::new(0.0, 30.0, 601).unwrap().points();
    let profile = radial_profile(&family, Quantity::Z, 0.0, 0.0, &rho, &DerivativeScheme::default()).unwrap();
    let lib = fit_falloff(&profile, [5.0, 25.0]).unwrap();

    assert_eq!(cli.model, lib.model);
    assert_eq!(cli.points, lib.points);
    for (a, b) in [
        (cli.rate, lib.rate),
        (cli.prefactor_power, lib.prefactor_power),
        (cli.log_amplitude, lib.log_amplitude),
        (cli.rms_residual, lib.rms_residual),
    ] {
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
    }
    assert_eq!(cli.model, FalloffModel::Exponential);
    assert!((cli.rate - 1.0).abs() < 0.02);
}

#[test]
fn fit_recovers_power_law() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let mut text = String::from("rho,modulus\n");
    for i in 0..100 {
        let r = 1.0 + i as f64 * 0.5;
        text.push_str(&format!("{r:.16e},{:.16e}\n", r.powf(-3.5)));
    }
    fs::write(&csv, text).unwrap();
    let fit = parse_fit(&photoloc(&["fit", path_str(&csv)]));
    assert_eq!(fit.model, FalloffModel::Power);
    assert!((fit.rate - 3.5).abs() < 1e-6);
}

#[test]
fn config_file_sets_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "family = \"fwm\"\nrho-max = 10.0\nrho-count = 16\n").unwrap();
    let text = stdout(&photoloc(&["scan", "--config", path_str(&cfg)]));
    assert_eq!(text.lines().count(), 17);
    assert!(text.lines().last().unwrap().starts_with("1.0000000000000000e1,"));
    let text = stdout(&photoloc(&["scan", "--config", path_str(&cfg), "--rho-count", "21"]));
    assert_eq!(text.lines().count(), 22);

    // focus wave mode waist: |Z| = exp(-rho^2 / 2) with l = a = 1
    let row: Vec<f64> = text.lines().nth(3).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((row[1] - (-row[0] * row[0] / 2.0).exp()).abs() < 1e-15);
}

#[test]
fn lambda_unit_rescales_lengths() {
    let l = stdout(&photoloc(&["scan", "--rho-max", "6.283185307179586", "--rho-count", "21"]));
    let lambda = stdout(&photoloc(&["scan", "--unit", "lambda", "--delta", "0.015915494309189534", "--rho-max", "1", "--rho-count", "21"]));
    let modulus = |t: &str| -> Vec<f64> { t.lines().skip(1).map(|r| r.split(',').nth(1).unwrap().parse().unwrap()).collect() };
    assert_eq!(modulus(&lambda).len(), 21);
    for (a, b) in modulus(&l).iter().zip(modulus(&lambda)) {
        assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }
}

#[test]
fn surface_moves_rigidly() {
    let beta: f64 = 0.995;
    let shift = 100.0 / beta;
    let base = photoloc(&["surface", "--x-min", "-10", "--x-max", "10", "--x-count", "5", "--z-min", "-10", "--z-max", "10", "--z-count", "5"]);
    let (zmin, zmax) = (format!("{}", -10.0 + shift), format!("{}", 10.0 + shift));
    let moved = photoloc(&[
        "surface", "--tau", "100", "--x-min", "-10", "--x-max", "10", "--x-count", "5", "--z-min", &zmin, "--z-max", &zmax,
        "--z-count", "5",
    ]);
    let modulus = |o: &Output| -> Vec<f64> {
        stdout(o).lines().skip(1).map(|r| r.split(',').nth(2).unwrap().parse().unwrap()).collect()
    };
    let (a, b) = (modulus(&base), modulus(&moved));
    assert_eq!(a.len(), 25);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-10, "{x} vs {y}");
    }
}

#[test]
fn exit_statuses() {
    assert_eq!(code(&photoloc(&["verify", "lorentz", "--seed", "7"])), 0);
    assert_eq!(code(&photoloc(&["verify", "everything"])), 2);
    assert_eq!(code(&photoloc(&["scan", "--rho-count", "1"])), 2);
    assert_eq!(code(&photoloc(&["scan", "--rho-count", "15"])), 2);
    assert_eq!(code(&photoloc(&["scan", "--rho-min", "3", "--rho-max", "3"])), 2);
    assert_eq!(code(&photoloc(&["scan", "--delta", "-1"])), 2);
    assert_eq!(code(&photoloc(&["scan", "--bogus"])), 2);
    assert_eq!(code(&photoloc(&["surface", "--z", "1"])), 2);

    // finite-difference step below the rounding floor is an evaluation failure
    let out = photoloc(&["scan", "--quantity", "F2", "--derivative", "finite-difference", "--step", "1e-18"]);
    assert_eq!(code(&out), 1);

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "rho,modulus\n").unwrap();
    let out = photoloc(&["fit", path_str(&empty)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 8"));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "rho,modulus\n1,2\n2,oops\n").unwrap();
    let out = photoloc(&["fit", path_str(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "colour = 1\n").unwrap();
    assert_eq!(code(&photoloc(&["scan", "--config", path_str(&cfg)])), 2);
}
