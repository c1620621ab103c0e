//! Executes a scenario into output files and a one-line summary.

use std::fmt::Write as _;

use mhom::analysis::{gaussian_peak, local_maxima};
use mhom::comb::{self, CombReport, Marginal};
use mhom::interferogram::{rate_modified_quadrature, scan, QuadratureSpec};
use mhom::io::{map_to_csv, Table};
use mhom::maps::{conjugate_time_map, freq_delay_map, spectral_map, SpectralMap};
use mhom::validation::{compare_routes, route_matrix, RouteComparison};
use mhom::{Axis, Coords, Error, Grid1D, Grid2D, InterferometerConfig, Method, SourceModel};
use serde::Serialize;
use serde_json::json;

use crate::scenario::{Format, Kind, PumpKind, Scenario};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                Error::Resolution(_) | Error::Window(_) => 3,
                Error::InvalidInput(_)
                | Error::ContractViolation(_)
                | Error::AxisMismatch(_)
                | Error::Parse(_) => 2,
                Error::NotFound(_) | Error::FeatureNotFound(_) => 1,
            },
            CliError::Io(_) | CliError::Failed(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Core(e) => match e {
                Error::InvalidInput(_) => "invalid-input",
                Error::ContractViolation(_) => "contract-violation",
                Error::Resolution(_) => "resolution",
                Error::Window(_) => "window",
                Error::AxisMismatch(_) => "axis-mismatch",
                Error::NotFound(_) => "not-found",
                Error::FeatureNotFound(_) => "feature-not-found",
                Error::Parse(_) => "parse",
            },
            CliError::Io(_) => "io",
            CliError::Failed(_) => "failed",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Everything a run produces.
#[derive(Debug, Default)]
pub struct Output {
    /// (file name, contents) in emission order.
    pub files: Vec<(String, String)>,
    pub summary: String,
}

fn ext(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn to_json<S: Serialize>(v: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Failed(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn model(s: &Scenario) -> Result<SourceModel<f64>> {
    Ok(match s.source.pump {
        PumpKind::Cw => SourceModel::cw(s.source.sigma_minus)?,
        PumpKind::Pulsed => SourceModel::pulsed(s.source.sigma_plus, s.source.sigma_minus)?,
    })
}

fn config(s: &Scenario) -> Result<InterferometerConfig<f64>> {
    let i = &s.interferometer;
    Ok(InterferometerConfig::new(i.tau0, i.phi, i.tau)?)
}

fn tau_grid(s: &Scenario) -> Result<Grid1D<f64>> {
    let r = s.grid.tau;
    Ok(Grid1D::span(r.start, r.end, r.count, Axis::Tau)?)
}

pub fn run(s: &Scenario) -> Result<Output> {
    match s.kind {
        Kind::Interferogram => interferogram(s),
        Kind::SpectralMap => spectral(s),
        Kind::FreqDelayMap | Kind::ConjugateMap => freq_delay(s),
        Kind::CombReport => comb_report(s),
        Kind::Design => design(s),
        Kind::Validate => validate(s),
    }
}

fn interferogram(s: &Scenario) -> Result<Output> {
    let m = model(s)?;
    let delays = tau_grid(s)?;
    let i = &s.interferometer;
    let phases = if i.phases.is_empty() { vec![i.phi] } else { i.phases.clone() };
    let labels: Vec<String> = if !i.phase_labels.is_empty() {
        if i.phase_labels.len() != phases.len() {
            return Err(CliError::Config(format!(
                "{} phase labels for {} phases",
                i.phase_labels.len(),
                phases.len()
            )));
        }
        i.phase_labels.clone()
    } else if phases.len() == 1 {
        vec!["rate".into()]
    } else {
        (0..phases.len()).map(|k| format!("phi{k}")).collect()
    };

    let mut table = Table::new(delays);
    let mut summary = format!("{}: interferogram over {} delays;", s.name, delays.count);
    for (phi, label) in phases.iter().zip(&labels) {
        let c = InterferometerConfig::new(i.tau0, *phi, 0.0)?;
        let ig = match i.quadrature_points {
            Some(n) if i.method == Method::Quadrature => {
                let quad = QuadratureSpec {
                    span_sigmas: 8.0,
                    points_sum: n,
                    points_difference: n,
                };
                let mut ig = scan(&m, &c, &delays, Method::ClosedForm)?;
                ig.values = (0..delays.count)
                    .map(|k| rate_modified_quadrature(&m, i.tau0, *phi, delays.at(k), &quad))
                    .collect::<mhom::Result<_>>()?;
                ig.method = Method::Quadrature;
                ig
            }
            _ => scan(&m, &c, &delays, i.method)?,
        };
        let (kmin, kmax) = extrema(&ig.values);
        let _ = write!(
            summary,
            " {label}: min {:.6} at tau={:.4}, max {:.6} at tau={:.4}, R(0)={:.6};",
            ig.values[kmin],
            delays.at(kmin),
            ig.values[kmax],
            delays.at(kmax),
            ig.at(0.0)
        );
        table.metadata.push((format!("{label}.phi"), format!("{phi:.16e}")));
        table.metadata.push((format!("{label}.baseline"), format!("{:.16e}", ig.baseline)));
        table.push_column(label.clone(), ig.values)?;
    }
    let mut head = vec![(
        "pump".to_string(),
        if m.is_cw() { "cw" } else { "pulsed" }.to_string(),
    )];
    if !m.is_cw() {
        head.push(("sigma_plus".into(), format!("{:.16e}", m.sigma_plus())));
    }
    head.push(("sigma_minus".into(), format!("{:.16e}", m.sigma_minus())));
    head.push(("tau0".into(), format!("{:.16e}", i.tau0)));
    head.append(&mut table.metadata);
    table.metadata = head;

    let contents = match s.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let columns: serde_json::Map<String, serde_json::Value> = table
                .columns
                .iter()
                .map(|(n, v)| (n.clone(), json!(v)))
                .collect();
            let metadata: serde_json::Map<String, serde_json::Value> = table
                .metadata
                .iter()
                .map(|(k, v)| (k.clone(), json!(v)))
                .collect();
            to_json(&json!({ "grid": table.grid, "values": columns, "metadata": metadata }))?
        }
    };
    summary.pop();
    Ok(Output {
        files: vec![(format!("{}.{}", s.name, ext(s.format)), contents)],
        summary,
    })
}

fn extrema(v: &[f64]) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for (k, x) in v.iter().enumerate() {
        if *x < v[lo] {
            lo = k;
        }
        if *x > v[hi] {
            hi = k;
        }
    }
    (lo, hi)
}

fn map_output(s: &Scenario, map: &SpectralMap<f64>, mut summary: String) -> Result<Output> {
    let contents = match s.format {
        Format::Csv => map_to_csv(map),
        Format::Json => to_json(map)?,
    };
    let (kmin, kmax) = extrema(&map.values);
    let n = map.grid.cols.count;
    let at = |k: usize| (map.grid.rows.at(k / n), map.grid.cols.at(k % n));
    let (r, c) = at(kmax);
    let _ = write!(
        summary,
        "min {:.6e}, max {:.6e} at ({}={:.4}, {}={:.4})",
        map.values[kmin],
        map.values[kmax],
        map.grid.rows.axis.as_str(),
        r,
        map.grid.cols.axis.as_str(),
        c
    );
    Ok(Output {
        files: vec![(format!("{}.{}", s.name, ext(s.format)), contents)],
        summary,
    })
}

fn spectral(s: &Scenario) -> Result<Output> {
    let m = model(s)?;
    let c = config(s)?;
    let o = s.grid.omega;
    let grid = match s.grid.coords {
        Coords::SignalIdler => Grid2D::signal_idler(o.half_span, o.count)?,
        Coords::SumDifference => Grid2D::sum_difference(o.half_span, o.count, o.half_span, o.count)?,
        other => {
            return Err(CliError::Config(format!(
                "spectral maps need signal-idler or sum-difference coordinates, not {other:?}"
            )))
        }
    };
    let map = spectral_map(&m, &c, &grid, s.grid.map)?;
    let summary = format!(
        "{}: {} map {}x{}; ",
        s.name,
        s.grid.map.as_str(),
        grid.rows.count,
        grid.cols.count
    );
    map_output(s, &map, summary)
}

fn freq_delay(s: &Scenario) -> Result<Output> {
    let m = model(s)?;
    let i = &s.interferometer;
    let taus = tau_grid(s)?;
    let omegas = Grid1D::symmetric(s.grid.omega.half_span, s.grid.omega.count, Axis::Omega)?;
    let map = freq_delay_map(&m, &taus, &omegas, i.tau0, i.phi)?;
    if s.kind == Kind::FreqDelayMap {
        let summary = format!("{}: freq-delay map {}x{}; ", s.name, taus.count, omegas.count);
        return map_output(s, &map, summary);
    }
    let conj = conjugate_time_map(&map)?;
    let row0 = conj.grid.rows.nearest(0.0);
    let line = conj.row(row0);
    let mut peaks: Vec<usize> = local_maxima(line);
    let top = line.iter().copied().fold(0.0, f64::max);
    peaks.retain(|&k| line[k] > 1e-3 * top);
    let mut summary = format!(
        "{}: conjugate-time map {}x{}; tau=0 peaks at T =",
        s.name, conj.grid.rows.count, conj.grid.cols.count
    );
    for &k in &peaks {
        let (off, h) = gaussian_peak(line, k);
        let _ = write!(summary, " {:.4} (height {:.6e})", conj.grid.cols.at(k) + off * conj.grid.cols.step, h);
    }
    summary.push_str("; ");
    map_output(s, &conj, summary)
}

#[derive(Serialize)]
struct CombCell {
    row: usize,
    col: usize,
    sigma_plus: f64,
    sigma_minus: f64,
    tau0: f64,
    marginal: Marginal,
    report: CombReport<f64>,
}

fn comb_report(s: &Scenario) -> Result<Output> {
    let pairs = if s.comb.sigma_pairs.is_empty() {
        vec![[s.source.sigma_plus, s.source.sigma_minus]]
    } else {
        s.comb.sigma_pairs.clone()
    };
    let taus = if s.comb.tau0_values.is_empty() {
        vec![s.interferometer.tau0]
    } else {
        s.comb.tau0_values.clone()
    };
    let (phi, win, thr) = (s.interferometer.phi, s.comb.window_sigmas, s.comb.threshold);
    let mut cells = Vec::new();
    let mut spectra = Vec::new();
    for (r, pair) in pairs.iter().enumerate() {
        let m = if s.source.pump == PumpKind::Cw {
            SourceModel::cw(pair[1])?
        } else {
            SourceModel::pulsed(pair[0], pair[1])?
        };
        for (c, &tau0) in taus.iter().enumerate() {
            let mut marginals = vec![s.comb.marginal];
            let dominant = Marginal::dominant(&m);
            if !m.is_cw() && dominant != s.comb.marginal {
                marginals.push(dominant);
            }
            for which in marginals {
                let spectrum = if m.is_cw() {
                    comb::cw_spectrum(&m, tau0, phi, &comb::cw_grid(&m, tau0, win)?)?
                } else if matches!(which, Marginal::SumAxis | Marginal::DiffAxis) {
                    comb::axis_marginal(&m, tau0, phi, which, &comb::marginal_axis_grid(&m, which, tau0, win)?)?
                } else {
                    let cfg = InterferometerConfig::new(tau0, phi, 0.0)?;
                    comb::marginal_spectrum(&m, &cfg, which, &comb::marginal_grid(&m, which, tau0, win)?)?
                };
                let report = comb::count_teeth(&spectrum, thr)?;
                if which == s.comb.marginal {
                    spectra.push((r, c, spectrum));
                }
                cells.push(CombCell {
                    row: r + 1,
                    col: c + 1,
                    sigma_plus: m.sigma_plus(),
                    sigma_minus: m.sigma_minus(),
                    tau0,
                    marginal: which,
                    report,
                });
            }
        }
    }

    let mut files = Vec::new();
    match s.format {
        Format::Csv => {
            let mut out = String::from("row,col,sigma_plus,sigma_minus,tau0,marginal,teeth,spacing,visibility,centers\n");
            for cell in &cells {
                let centers: Vec<String> =
                    cell.report.teeth.iter().map(|t| format!("{:.16e}", t.center.value())).collect();
                let _ = writeln!(
                    out,
                    "{},{},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{}",
                    cell.row,
                    cell.col,
                    cell.sigma_plus,
                    cell.sigma_minus,
                    cell.tau0,
                    marginal_name(cell.marginal),
                    cell.report.dimensionality,
                    cell.report.spacing,
                    cell.report.visibility,
                    centers.join(";")
                );
            }
            files.push((format!("{}.csv", s.name), out));
            for (r, c, sp) in &spectra {
                let mut t = Table::new(sp.grid);
                t.push_column("value", sp.values.clone())?;
                if let Some(env) = &sp.envelope {
                    t.push_column("envelope", env.clone())?;
                }
                files.push((format!("{}-r{}-c{}.csv", s.name, r + 1, c + 1), t.to_csv()));
            }
        }
        Format::Json => {
            let spectra_json: Vec<_> = spectra
                .iter()
                .map(|(r, c, sp)| json!({ "row": r + 1, "col": c + 1, "spectrum": sp }))
                .collect();
            files.push((
                format!("{}.json", s.name),
                to_json(&json!({ "cells": cells, "spectra": spectra_json }))?,
            ));
        }
    }

    let mut summary = format!("{}: {} marginal teeth", s.name, marginal_name(s.comb.marginal));
    for (r, pair) in pairs.iter().enumerate() {
        let counts: Vec<String> = cells
            .iter()
            .filter(|c| c.marginal == s.comb.marginal)
            .skip(r * taus.len())
            .take(taus.len())
            .map(|c| c.report.dimensionality.to_string())
            .collect();
        let _ = write!(summary, "; ({}, {}): [{}]", pair[0], pair[1], counts.join(", "));
    }
    Ok(Output { files, summary })
}

fn marginal_name(m: Marginal) -> &'static str {
    match m {
        Marginal::Signal => "signal",
        Marginal::Idler => "idler",
        Marginal::SumAxis => "sum-axis",
        Marginal::DiffAxis => "diff-axis",
    }
}

fn design(s: &Scenario) -> Result<Output> {
    let m = model(s)?;
    let mut rows = Vec::new();
    for &target in &s.comb.targets {
        match comb::design_tau0(&m, target, s.comb.window_sigmas) {
            Ok(t) => rows.push((target, Some(t.value()))),
            Err(Error::NotFound(_)) => rows.push((target, None)),
            Err(e) => return Err(e.into()),
        }
    }
    let contents = match s.format {
        Format::Csv => {
            let mut out = String::from("target,tau0\n");
            for (t, v) in &rows {
                let _ = writeln!(out, "{t},{}", v.map(|x| format!("{x:.16e}")).unwrap_or_default());
            }
            out
        }
        Format::Json => to_json(
            &rows
                .iter()
                .map(|(t, v)| json!({ "target": t, "tau0": v }))
                .collect::<Vec<_>>(),
        )?,
    };
    let parts: Vec<String> = rows
        .iter()
        .map(|(t, v)| match v {
            Some(x) => format!("{t} -> {x:.6} ps"),
            None => format!("{t} -> none"),
        })
        .collect();
    Ok(Output {
        files: vec![(format!("{}.{}", s.name, ext(s.format)), contents)],
        summary: format!("{}: {}", s.name, parts.join(", ")),
    })
}

fn validate(s: &Scenario) -> Result<Output> {
    let results: Vec<RouteComparison<f64>> = route_matrix::<f64>()?
        .iter()
        .map(compare_routes)
        .collect::<mhom::Result<_>>()?;
    let passed = results.iter().filter(|r| r.passes()).count();
    let worst = results.iter().map(|r| r.spread()).fold(0.0, f64::max);
    let contents = match s.format {
        Format::Csv => {
            let mut out = String::from(
                "case,sigma_plus,sigma_minus,tau0,phi,tau,closed_form,quadrature,jti,spread,pass\n",
            );
            for (k, r) in results.iter().enumerate() {
                let c = &r.case;
                let _ = writeln!(
                    out,
                    "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.3e},{}",
                    k + 1,
                    c.model.sigma_plus(),
                    c.model.sigma_minus(),
                    c.config.tau0.value(),
                    c.config.phi,
                    c.config.tau.value(),
                    r.closed_form,
                    r.quadrature,
                    r.jti,
                    r.spread(),
                    if r.passes() { "pass" } else { "fail" }
                );
            }
            out
        }
        Format::Json => to_json(
            &results
                .iter()
                .map(|r| json!({ "comparison": r, "spread": r.spread(), "pass": r.passes() }))
                .collect::<Vec<_>>(),
        )?,
    };
    let summary = format!(
        "{}: {passed}/{} configurations agree (largest spread {worst:.3e})",
        s.name,
        results.len()
    );
    let out = Output {
        files: vec![(format!("{}.{}", s.name, ext(s.format)), contents)],
        summary,
    };
    if passed != results.len() {
        return Err(CliError::Failed(out.summary));
    }
    Ok(out)
}
