//! Matching at the contact interaction and the resulting reflection,
//! transmission and closed-channel occupation probabilities.

use std::collections::BTreeMap;

use log::warn;
use nalgebra::{Matrix6, Vector6};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{self, ChannelSet};
use crate::error::{Error, Result};
use crate::params::{SystemParams, EPS_THRESHOLD};

/// Relative residual accepted from the dense solve.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Default landmark exclusion radius for sweeps.
pub const SWEEP_EXCLUSION: f64 = 1e-6;

/// Six matching conditions at x = 0 for the unknown amplitudes c₁..c₆.
///
/// Rows 0..3 are continuity of the three spinor components, rows 3 and 4
/// derivative continuity of the |T₁⟩ and |T₂⟩ components and row 5 the
/// derivative jump of the singlet component, `ψ'(0⁺) − ψ'(0⁻) = g ψ(0)`.
/// Column `l − 1` multiplies the state with label `l`; even labels enter with
/// a plus sign (right solution), odd labels with a minus sign (left solution).
#[derive(Debug, Clone)]
pub struct MatchingSystem {
    pub matrix: Matrix6<Complex64>,
    pub rhs: Vector6<Complex64>,
    pub incident_label: Option<usize>,
    pub channels: ChannelSet,
}

impl MatchingSystem {
    /// Homogeneous system (no incident wave) at the channel set's energy.
    pub fn homogeneous(channels: ChannelSet, g: f64) -> Self {
        Self {
            matrix: matching_matrix(&channels, g),
            rhs: Vector6::zeros(),
            incident_label: None,
            channels,
        }
    }

    /// Solves by partially pivoted LU with one step of iterative refinement
    /// when the residual check fails.
    pub fn solve(&self) -> Result<Vector6<Complex64>> {
        let lu = self.matrix.lu();
        let singular = || Error::SingularSystem {
            condition: condition_number(&self.matrix),
        };
        let mut x = lu.solve(&self.rhs).ok_or_else(singular)?;
        let scale = self.rhs.norm().max(f64::MIN_POSITIVE);
        let mut r = self.rhs - self.matrix * x;
        if r.norm() > RESIDUAL_TOL * scale {
            x += lu.solve(&r).ok_or_else(singular)?;
            r = self.rhs - self.matrix * x;
        }
        if r.norm() > RESIDUAL_TOL * scale || x.iter().any(|z| !z.is_finite()) {
            return Err(singular());
        }
        Ok(x)
    }

    /// Singular values, largest first.
    pub fn singular_values(&self) -> Vector6<f64> {
        let mut sv = self.matrix.svd(false, false).singular_values;
        sv.as_mut_slice().sort_by(|a, b| b.total_cmp(a));
        sv
    }
}

fn condition_number(m: &Matrix6<Complex64>) -> f64 {
    let sv = m.svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

pub fn matching_matrix(channels: &ChannelSet, g: f64) -> Matrix6<Complex64> {
    let i = Complex64::i();
    let mut m = Matrix6::zeros();
    for state in channels.states() {
        let col = state.label - 1;
        let sign = if state.placement.is_right() {
            1.0
        } else {
            -1.0
        };
        let ik = i * state.k;
        for comp in 0..3 {
            m[(comp, col)] = sign * state.spinor[comp];
        }
        m[(3, col)] = sign * ik * state.spinor[1];
        m[(4, col)] = sign * ik * state.spinor[2];
        let jump = if state.placement.is_right() {
            ik - g
        } else {
            ik
        };
        m[(5, col)] = sign * jump * state.spinor[0];
    }
    m
}

pub fn build_matching_system(
    energy: f64,
    incident_label: usize,
    params: &SystemParams,
) -> Result<MatchingSystem> {
    build_matching_system_with(energy, incident_label, params, EPS_THRESHOLD)
}

fn build_matching_system_with(
    energy: f64,
    incident_label: usize,
    params: &SystemParams,
    radius: f64,
) -> Result<MatchingSystem> {
    params.validate()?;
    let channels = dispersion::build_channel_set_with(energy, params, radius)?;
    if !(1..=6).contains(&incident_label) || !channels.state(incident_label).is_incoming_capable() {
        return Err(Error::ClosedIncidentChannel {
            label: incident_label,
            energy,
        });
    }
    let inc = channels.state(incident_label);
    let ik = Complex64::i() * inc.k;
    let rhs = Vector6::new(
        inc.spinor[0],
        inc.spinor[1],
        inc.spinor[2],
        ik * inc.spinor[1],
        ik * inc.spinor[2],
        ik * inc.spinor[0],
    );
    Ok(MatchingSystem {
        matrix: matching_matrix(&channels, params.g),
        rhs,
        incident_label: Some(incident_label),
        channels,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringResult {
    pub incident_label: usize,
    pub energy: f64,
    /// Open left-going label → reflection probability.
    pub reflection: BTreeMap<usize, f64>,
    /// Open right-going label → transmission probability.
    pub transmission: BTreeMap<usize, f64>,
    /// Closed label → |c|².
    pub occupation: BTreeMap<usize, f64>,
    pub conservation_residual: f64,
}

impl ScatteringResult {
    pub fn total_reflection(&self) -> f64 {
        self.reflection.values().sum()
    }

    pub fn total_transmission(&self) -> f64 {
        self.transmission.values().sum()
    }
}

pub fn solve_scattering(
    energy: f64,
    incident_label: usize,
    params: &SystemParams,
) -> Result<ScatteringResult> {
    solve_scattering_with(energy, incident_label, params, EPS_THRESHOLD)
}

/// As [`solve_scattering`] with an explicit landmark exclusion radius.
pub fn solve_scattering_with(
    energy: f64,
    incident_label: usize,
    params: &SystemParams,
    radius: f64,
) -> Result<ScatteringResult> {
    let system = build_matching_system_with(energy, incident_label, params, radius)?;
    let amps = system.solve()?;
    let v_in = system.channels.state(incident_label).flux;
    let mut reflection = BTreeMap::new();
    let mut transmission = BTreeMap::new();
    let mut occupation = BTreeMap::new();
    for state in system.channels.states() {
        let c2 = amps[state.label - 1].norm_sqr();
        if state.is_open() {
            let p = c2 * state.flux.abs() / v_in;
            if state.placement.is_right() {
                transmission.insert(state.label, p);
            } else {
                reflection.insert(state.label, p);
            }
        } else {
            occupation.insert(state.label, c2);
        }
    }
    let total: f64 = reflection.values().chain(transmission.values()).sum();
    Ok(ScatteringResult {
        incident_label,
        energy,
        reflection,
        transmission,
        occupation,
        conservation_residual: (total - 1.0).abs(),
    })
}

/// One row of a sweep; failures are kept in place.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub energy: f64,
    pub outcome: Result<ScatteringResult>,
}

/// Solves every grid energy (in parallel) and returns results in grid order.
/// Points within `exclusion` of a landmark come back as
/// [`Error::DegenerateEnergy`].
pub fn sweep(
    energies: &[f64],
    incident_label: usize,
    params: &SystemParams,
    exclusion: f64,
) -> Vec<SweepPoint> {
    energies
        .par_iter()
        .map(|&energy| {
            let outcome = solve_scattering_with(energy, incident_label, params, exclusion);
            if let Err(err @ Error::DegenerateEnergy { .. }) = &outcome {
                warn!("skipping sweep point: {err}");
            }
            SweepPoint { energy, outcome }
        })
        .collect()
}
