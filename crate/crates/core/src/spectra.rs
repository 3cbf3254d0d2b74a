//! Reflection-resonance positions in the single-open-channel window and
//! bound states below the lowest threshold.

use nalgebra::Matrix6;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion;
use crate::error::{Error, Result};
use crate::params::{channel_census_with, OpenRegion, SystemParams};
use crate::scattering::{self, MatchingSystem, SWEEP_EXCLUSION};

pub const DEFAULT_GRID: usize = 2001;
pub const DEFAULT_REFINE_TOL: f64 = 1e-8;
/// Minimum refined reflection for a local maximum to count as a resonance.
/// A quasi-bound state in a single open channel reflects totally; threshold
/// bumps that stay below this are background.
pub const PEAK_THRESHOLD: f64 = 0.99;
/// Maximum secular value accepted as a bound state.
pub const SECULAR_TOL: f64 = 1e-8;
/// Depth of the default bound-state search window below the lowest threshold.
pub const BOUND_WINDOW_DEPTH: f64 = 10.0;
pub const DEFAULT_BOUND_GRID: usize = 4001;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[a, b]`.
fn golden_max(mut a: f64, mut b: f64, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonancePeak {
    pub energy: f64,
    pub reflection: f64,
}

/// Total reflection for the single open incoming channel, or `None` where the
/// solve fails.
fn reflection_at(energy: f64, params: &SystemParams) -> Option<f64> {
    scattering::solve_scattering_with(energy, 6, params, SWEEP_EXCLUSION)
        .ok()
        .map(|r| r.total_reflection())
}

/// Locates reflection resonances in `window`, which must lie inside the
/// single-open-channel region `[-Ω, 0]`.
///
/// Every strict interior local maximum of the grid scan is refined by golden
/// section between its neighbours; refined peaks with `R ≥ 0.99` are kept.
pub fn find_resonances(
    params: &SystemParams,
    window: (f64, f64),
    grid_n: usize,
    refine_tol: f64,
) -> Result<Vec<ResonancePeak>> {
    params.validate()?;
    let (lo, hi) = window;
    let mismatch = Error::WindowMismatch { lo, hi };
    if !(lo < hi && lo >= -params.omega && hi <= 0.0) {
        return Err(mismatch);
    }
    let lo = lo.max(-params.omega + SWEEP_EXCLUSION);
    let hi = hi.min(-SWEEP_EXCLUSION);
    if lo >= hi {
        return Err(mismatch);
    }
    for e in [lo, hi] {
        match channel_census_with(e, params, 0.0) {
            Ok(c) if c.region == OpenRegion::SingleOpen => {}
            _ => return Err(mismatch),
        }
    }

    let grid = linspace(lo, hi, grid_n);
    let values: Vec<Option<f64>> = grid.iter().map(|&e| reflection_at(e, params)).collect();
    let mut peaks: Vec<ResonancePeak> = Vec::new();
    for i in 1..grid.len().saturating_sub(1) {
        let (Some(left), Some(mid), Some(right)) = (values[i - 1], values[i], values[i + 1]) else {
            continue;
        };
        if !(mid > left && mid > right) {
            continue;
        }
        let (energy, reflection) = golden_max(grid[i - 1], grid[i + 1], refine_tol, |e| {
            reflection_at(e, params).unwrap_or(f64::NEG_INFINITY)
        });
        if reflection >= PEAK_THRESHOLD {
            peaks.push(ResonancePeak { energy, reflection });
        }
    }
    peaks.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    peaks.dedup_by(|a, b| (a.energy - b.energy).abs() <= refine_tol);
    Ok(peaks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceEntry {
    pub g: f64,
    pub peaks: Vec<ResonancePeak>,
    /// Set when the search failed for this coupling.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceCurve {
    pub omega: f64,
    pub entries: Vec<ResonanceEntry>,
}

/// Resonance positions over a grid of attractive couplings, ordered as given.
pub fn resonance_curve(params: &SystemParams, g_grid: &[f64]) -> ResonanceCurve {
    let entries = g_grid
        .par_iter()
        .map(|&g| {
            let p = params.with_g(g);
            let outcome = if g < 0.0 {
                find_resonances(&p, (-params.omega, 0.0), DEFAULT_GRID, DEFAULT_REFINE_TOL)
            } else {
                Err(Error::InvalidParams {
                    field: "g",
                    reason: format!("resonance search needs g < 0, got {g}"),
                })
            };
            match outcome {
                Ok(peaks) => ResonanceEntry {
                    g,
                    peaks,
                    error: None,
                },
                Err(e) => ResonanceEntry {
                    g,
                    peaks: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    ResonanceCurve {
        omega: params.omega,
        entries,
    }
}

fn normalized_columns(mut m: Matrix6<Complex64>) -> Matrix6<Complex64> {
    for mut col in m.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= Complex64::from(n);
        }
    }
    m
}

fn smallest_singular_value(m: Matrix6<Complex64>) -> f64 {
    m.svd(false, false).singular_values.min()
}

/// Smallest singular value of the homogeneous matching matrix with unit-norm
/// columns. Zeros below the lowest threshold are bound states, apart from the
/// root coalescence and branch point where two basis columns coincide.
pub fn secular(energy: f64, params: &SystemParams) -> Result<f64> {
    let channels = dispersion::build_channel_set(energy, params)?;
    let system = MatchingSystem::homogeneous(channels, params.g);
    Ok(smallest_singular_value(normalized_columns(system.matrix)))
}

/// Same quantity for the non-interacting system; small only where the channel
/// basis itself degenerates.
fn basis_degeneracy(energy: f64, params: &SystemParams) -> Result<f64> {
    secular(energy, &params.with_g(0.0))
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
fn golden_min(a: f64, b: f64, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let (x, fx) = golden_max(a, b, tol, |e| -f(e));
    (x, -fx)
}

/// Default search window `[E_t - 10, E_t - 1e-6]`.
pub fn default_bound_window(params: &SystemParams) -> (f64, f64) {
    let thr = params.lowest_threshold();
    (thr - BOUND_WINDOW_DEPTH, thr - SWEEP_EXCLUSION)
}

/// Bound-state energies in `window` (entirely below the lowest threshold).
///
/// The grid is uniform in `√(E_t − E)` so shallow states close to threshold
/// are resolved. Local minima of [`secular`] are refined by golden section and
/// accepted when the refined value is at most [`SECULAR_TOL`] and far below
/// the non-interacting value, which rules out zeros caused by coinciding
/// basis columns.
pub fn find_bound_states(
    params: &SystemParams,
    window: (f64, f64),
    grid_n: usize,
) -> Result<Vec<f64>> {
    params.validate()?;
    let thr = params.lowest_threshold();
    let (lo, hi) = window;
    if !(lo < hi && hi < thr) {
        return Err(Error::WindowMismatch { lo, hi });
    }
    if params.g == 0.0 {
        return Ok(Vec::new());
    }
    let (u_lo, u_hi) = ((thr - hi).sqrt(), (thr - lo).sqrt());
    let grid: Vec<f64> = linspace(u_lo, u_hi, grid_n)
        .into_iter()
        .map(|u| thr - u * u)
        .collect();
    let sigma = |e: f64| secular(e, params).unwrap_or(f64::INFINITY);
    let values: Vec<f64> = grid.par_iter().map(|&e| sigma(e)).collect();

    let mut found: Vec<f64> = Vec::new();
    for i in 1..grid.len().saturating_sub(1) {
        if !(values[i] <= values[i - 1] && values[i] <= values[i + 1]) {
            continue;
        }
        // Grid runs downward in energy.
        let (a, b) = (grid[i + 1], grid[i - 1]);
        let tol = 1e-15 * a.abs().max(1.0);
        let (energy, value) = golden_min(a, b, tol, sigma);
        if value > SECULAR_TOL {
            continue;
        }
        if basis_degeneracy(energy, params).map_or(true, |d| value > 1e-3 * d) {
            continue;
        }
        found.push(energy);
    }
    found.sort_by(f64::total_cmp);
    found.dedup_by(|a, b| (*a - *b).abs() <= DEFAULT_REFINE_TOL);
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStateEntry {
    pub g: f64,
    pub energies: Vec<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStateSpectrum {
    pub omega: f64,
    pub entries: Vec<BoundStateEntry>,
}

pub fn bound_state_spectrum(params: &SystemParams, g_grid: &[f64]) -> BoundStateSpectrum {
    let window = default_bound_window(params);
    let entries = g_grid
        .par_iter()
        .map(
            |&g| match find_bound_states(&params.with_g(g), window, DEFAULT_BOUND_GRID) {
                Ok(energies) => BoundStateEntry {
                    g,
                    energies,
                    error: None,
                },
                Err(e) => BoundStateEntry {
                    g,
                    energies: Vec::new(),
                    error: Some(e.to_string()),
                },
            },
        )
        .collect();
    BoundStateSpectrum {
        omega: params.omega,
        entries,
    }
}
