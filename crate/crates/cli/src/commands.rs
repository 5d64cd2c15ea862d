use crate::config::{ScanConfig, SurfaceConfig};
use crate::error::CliError;
use photoloc::diagnostics::{fit_points, radial_profile, FalloffFit, FitOptions, ModelChoice};
use photoloc::fields::superpotential;
use photoloc::solutions::SpaceTimePoint;
use photoloc::suites::{run_suite, Report, Suite};
use rayon::prelude::*;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

/// Seventeen significant digits: lossless for `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn csv_writer(path: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink(path)?))
}

pub fn scan(config: &ScanConfig) -> Result<(), CliError> {
    let r = &config.resolved;
    let profile = radial_profile(
        &r.family,
        config.quantity,
        r.z,
        r.tau,
        &config.rho.points(),
        &config.scheme,
    )
    .map_err(CliError::failure)?;

    let mut out = csv_writer(config.output.as_deref())?;
    let mut header = vec!["rho", "modulus", "log10_modulus"];
    if config.reference {
        header.push("reference");
    }
    out.write_record(&header)?;
    for (&rho, &value) in profile.rho().iter().zip(profile.value()) {
        let mut row = vec![num(rho / r.unit_length), num(value), num(value.log10())];
        if config.reference {
            row.push(num((-rho / r.l).exp()));
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn surface(config: &SurfaceConfig) -> Result<(), CliError> {
    let r = &config.resolved;
    let (nx, nz) = (config.x.count, config.z.count);
    let rows = (0..nx * nz)
        .into_par_iter()
        .map(|k| {
            let (x, z) = (config.x.at(k / nz), config.z.at(k % nz));
            let p = SpaceTimePoint::new(x.abs(), z, r.tau)?;
            superpotential(p, &r.family).map(|v| (x, z, v))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::failure)?;

    let mut out = csv_writer(config.output.as_deref())?;
    out.write_record(["x", "z", "modulus", "real_part"])?;
    let u = r.unit_length;
    for (x, z, v) in rows {
        out.write_record([num(x / u), num(z / u), num(v.norm()), num(v.re)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn verify(suite: &str, seed: u64, output: Option<&Path>) -> Result<Report, CliError> {
    let suite: Suite = suite.parse().map_err(CliError::usage)?;
    let report = run_suite(suite, seed);
    let mut out = sink(output)?;
    serde_json::to_writer_pretty(&mut out, &report).map_err(CliError::failure)?;
    writeln!(out)?;
    out.flush()?;
    Ok(report)
}

/// `(rho, modulus)` columns of a CSV file, located by header name.
pub fn read_profile(reader: impl Read) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut csv = csv::ReaderBuilder::new().from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| CliError::Usage(format!("line 1: {e}")))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::Usage(format!("line 1: no '{name}' column")))
    };
    let (ci, vi) = (column("rho")?, column("modulus")?);
    let mut rho = Vec::new();
    let mut value = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Usage(format!("line {line}: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64, CliError> {
            let text = record
                .get(i)
                .ok_or_else(|| CliError::Usage(format!("line {line}: missing column {}", i + 1)))?;
            text.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("line {line}: '{text}' is not a number")))
        };
        rho.push(field(ci)?);
        value.push(field(vi)?);
    }
    Ok((rho, value))
}

pub fn fit(
    input: &Path,
    window: [Option<f64>; 2],
    model: ModelChoice,
    options: &FitOptions,
) -> Result<FalloffFit, CliError> {
    let file = File::open(input).map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
    let (rho, value) = read_profile(file)?;
    let window = [
        window[0].unwrap_or(f64::NEG_INFINITY),
        window[1].unwrap_or(f64::INFINITY),
    ];
    if window[0] >= window[1] {
        return Err(CliError::Usage(format!("empty window [{}, {}]", window[0], window[1])));
    }
    let fit = fit_points(&rho, &value, window, model, options).map_err(CliError::failure)?;
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &fit).map_err(CliError::failure)?;
    writeln!(out)?;
    Ok(fit)
}
