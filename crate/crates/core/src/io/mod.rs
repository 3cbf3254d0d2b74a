//! Command front end: runs one subcommand from a [`RunConfig`] and produces a
//! plot-ready [`ResultTable`].
//!
//! Column layouts (fixed):
//!
//! * `dispersion`: `E, n_open`, then for each label l = 1..6
//!   `k{l}_re, k{l}_im, k{l}_branch, k{l}_kind, k{l}_flux`, then `flag`.
//! * `scatter`: `E, R1, R3, R5, T2, T4, T6, q1..q6, residual, flag`. R/T cells
//!   are filled for open labels, q cells for closed labels.
//! * `resonances`: `g`, then `E_res_{n}, R_peak_{n}` for n = 1..max(2, peaks),
//!   then `flag`.
//! * `bound-states`: `g`, then `E_bs_{n}` for n = 1..max(1, states), then `flag`.

pub mod config;
pub mod table;

use std::time::{SystemTime, UNIX_EPOCH};

use crate::dispersion;
use crate::error::{Error, Result};
use crate::params::classify_regime;
use crate::scattering;
use crate::spectra;

pub use config::{Command, Grid, PartialConfig, RunConfig};
pub use table::{Cell, Column, ColumnType, Format, ResultTable};

pub const UNITS_NOTE: &str =
    "hbar=m=lambda=1; energies in hbar^2 lambda^2/2mu, k in lambda, g in hbar^2 lambda/m";

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: ResultTable,
    /// Rows that failed for numerical reasons (singular systems).
    pub numerical_failures: usize,
}

pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let mut out = match config.command {
        Command::Dispersion => run_dispersion(config)?,
        Command::Scatter => run_scatter(config)?,
        Command::Resonances => run_resonances(config)?,
        Command::BoundStates => run_bound_states(config)?,
    };
    if !config.no_meta {
        out.table.meta = metadata(config)?;
    }
    Ok(out)
}

fn metadata(config: &RunConfig) -> Result<std::collections::BTreeMap<String, String>> {
    let info = classify_regime(&config.params)?;
    let mut meta = std::collections::BTreeMap::new();
    meta.insert(
        "tool".into(),
        format!("socscatter {}", env!("CARGO_PKG_VERSION")),
    );
    meta.insert("command".into(), config.command.name().into());
    meta.insert("omega".into(), config.params.omega.to_string());
    meta.insert("regime".into(), format!("{:?}", info.regime));
    meta.insert(
        "lowest_threshold".into(),
        info.e_lowest_threshold.to_string(),
    );
    meta.insert("branch_point".into(), info.e_branch_point.to_string());
    match config.command {
        Command::Dispersion => {}
        Command::Scatter => {
            meta.insert("g".into(), config.params.g.to_string());
            meta.insert("incident".into(), config.incident.to_string());
        }
        Command::Resonances | Command::BoundStates => {}
    }
    meta.insert("exclusion".into(), config.exclusion.to_string());
    meta.insert("units".into(), UNITS_NOTE.into());
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    meta.insert("generated_unix".into(), stamp.to_string());
    Ok(meta)
}

fn flag_for(err: &Error) -> String {
    match err {
        Error::DegenerateEnergy { .. } => format!("excluded: {err}"),
        Error::ClosedIncidentChannel { .. } => "closed-incident".into(),
        other => format!("error: {other}"),
    }
}

fn is_numerical(err: &Error) -> bool {
    matches!(err, Error::SingularSystem { .. })
}

fn grid_of(grid: Option<Grid>, what: &str) -> Result<Vec<f64>> {
    grid.map(|g| g.points())
        .ok_or_else(|| Error::Config(format!("missing {what} grid")))
}

pub fn run_dispersion(config: &RunConfig) -> Result<RunOutput> {
    let mut columns = vec![Column::float("E"), Column::int("n_open")];
    for l in 1..=6 {
        columns.push(Column::float(format!("k{l}_re")));
        columns.push(Column::float(format!("k{l}_im")));
        columns.push(Column::text(format!("k{l}_branch")));
        columns.push(Column::text(format!("k{l}_kind")));
        columns.push(Column::float(format!("k{l}_flux")));
    }
    columns.push(Column::text("flag"));
    let width = columns.len();
    let mut table = ResultTable::new(columns);
    for e in grid_of(config.energy, "energy")? {
        match dispersion::build_channel_set_with(e, &config.params, config.exclusion) {
            Ok(set) => {
                let mut row = vec![Cell::Float(e), Cell::Int(set.census.n_open as i64)];
                for s in set.states() {
                    row.push(s.k.re.into());
                    row.push(s.k.im.into());
                    row.push(s.branch.to_string().into());
                    row.push(s.kind.name().into());
                    row.push(s.flux.into());
                }
                row.push("".into());
                table.push_row(row);
            }
            Err(err) => {
                let mut row = vec![Cell::Float(e)];
                row.resize(width - 1, Cell::Empty);
                row.push(flag_for(&err).into());
                table.push_row(row);
            }
        }
    }
    Ok(RunOutput {
        table,
        numerical_failures: 0,
    })
}

pub fn run_scatter(config: &RunConfig) -> Result<RunOutput> {
    let energies = grid_of(config.energy, "energy")?;
    let points = scattering::sweep(&energies, config.incident, &config.params, config.exclusion);
    let closed =
        |p: &scattering::SweepPoint| matches!(p.outcome, Err(Error::ClosedIncidentChannel { .. }));
    if points.iter().any(closed) && !points.iter().any(|p| p.outcome.is_ok()) {
        return Err(Error::Config(format!(
            "incident channel {} is closed everywhere in [{}, {}]",
            config.incident,
            energies[0],
            energies[energies.len() - 1]
        )));
    }

    let mut columns = vec![Column::float("E")];
    for l in [1, 3, 5] {
        columns.push(Column::float(format!("R{l}")));
    }
    for l in [2, 4, 6] {
        columns.push(Column::float(format!("T{l}")));
    }
    for l in 1..=6 {
        columns.push(Column::float(format!("q{l}")));
    }
    columns.push(Column::float("residual"));
    columns.push(Column::text("flag"));
    let width = columns.len();
    let mut table = ResultTable::new(columns);
    let mut numerical_failures = 0;
    for point in points {
        match point.outcome {
            Ok(r) => {
                let mut row = vec![Cell::Float(point.energy)];
                for l in [1, 3, 5] {
                    row.push(r.reflection.get(&l).copied().into());
                }
                for l in [2, 4, 6] {
                    row.push(r.transmission.get(&l).copied().into());
                }
                for l in 1..=6 {
                    row.push(r.occupation.get(&l).copied().into());
                }
                row.push(r.conservation_residual.into());
                row.push("".into());
                table.push_row(row);
            }
            Err(err) => {
                numerical_failures += is_numerical(&err) as usize;
                let mut row = vec![Cell::Float(point.energy)];
                row.resize(width - 1, Cell::Empty);
                row.push(flag_for(&err).into());
                table.push_row(row);
            }
        }
    }
    Ok(RunOutput {
        table,
        numerical_failures,
    })
}

pub fn run_resonances(config: &RunConfig) -> Result<RunOutput> {
    let g_grid = grid_of(config.couplings, "coupling")?;
    let curve = spectra::resonance_curve(&config.params, &g_grid);
    let n_peaks = curve
        .entries
        .iter()
        .map(|e| e.peaks.len())
        .max()
        .unwrap_or(0)
        .max(2);
    let mut columns = vec![Column::float("g")];
    for n in 1..=n_peaks {
        columns.push(Column::float(format!("E_res_{n}")));
        columns.push(Column::float(format!("R_peak_{n}")));
    }
    columns.push(Column::text("flag"));
    let mut table = ResultTable::new(columns);
    for entry in curve.entries {
        let mut row = vec![Cell::Float(entry.g)];
        for n in 0..n_peaks {
            let peak = entry.peaks.get(n);
            row.push(peak.map(|p| p.energy).into());
            row.push(peak.map(|p| p.reflection).into());
        }
        row.push(
            entry
                .error
                .map(|e| format!("error: {e}"))
                .unwrap_or_default()
                .into(),
        );
        table.push_row(row);
    }
    Ok(RunOutput {
        table,
        numerical_failures: 0,
    })
}

pub fn run_bound_states(config: &RunConfig) -> Result<RunOutput> {
    let g_grid = grid_of(config.couplings, "coupling")?;
    let spectrum = spectra::bound_state_spectrum(&config.params, &g_grid);
    let n_states = spectrum
        .entries
        .iter()
        .map(|e| e.energies.len())
        .max()
        .unwrap_or(0)
        .max(1);
    let mut columns = vec![Column::float("g")];
    for n in 1..=n_states {
        columns.push(Column::float(format!("E_bs_{n}")));
    }
    columns.push(Column::text("flag"));
    let mut table = ResultTable::new(columns);
    for entry in spectrum.entries {
        let mut row = vec![Cell::Float(entry.g)];
        for n in 0..n_states {
            row.push(entry.energies.get(n).copied().into());
        }
        row.push(
            entry
                .error
                .map(|e| format!("error: {e}"))
                .unwrap_or_default()
                .into(),
        );
        table.push_row(row);
    }
    Ok(RunOutput {
        table,
        numerical_failures: 0,
    })
}
