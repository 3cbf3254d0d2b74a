//! System parameters, regime classification and the energy landmarks that
//! bound the channel structure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensionless critical Raman strength separating the two regimes.
pub const OMEGA_CRITICAL: f64 = 2.0;

/// Default landmark proximity radius.
pub const EPS_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Raman coupling energy ħΩ, in ħ²λ²/m.
    pub omega: f64,
    /// Contact coupling, in ħ²λ/m. Attractive for `g < 0`.
    pub g: f64,
    /// Two-photon detuning. Only zero is supported.
    pub delta: f64,
    /// Centre-of-mass wave vector K. Only zero is supported.
    pub total_momentum: f64,
}

impl SystemParams {
    pub fn new(omega: f64, g: f64) -> Result<Self> {
        let params = Self {
            omega,
            g,
            delta: 0.0,
            total_momentum: 0.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { g, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::InvalidParams {
                field: "omega",
                reason: format!("must be finite and > 0, got {}", self.omega),
            });
        }
        if !self.g.is_finite() {
            return Err(Error::InvalidParams {
                field: "g",
                reason: format!("must be finite, got {}", self.g),
            });
        }
        if self.delta != 0.0 {
            return Err(Error::InvalidParams {
                field: "delta",
                reason: "nonzero detuning couples |T3> and is not supported".into(),
            });
        }
        if self.total_momentum != 0.0 {
            return Err(Error::InvalidParams {
                field: "total_momentum",
                reason: "only the centre-of-mass frame (K = 0) is supported".into(),
            });
        }
        Ok(())
    }

    pub fn regime(&self) -> Regime {
        if self.omega >= OMEGA_CRITICAL {
            Regime::SingleMinimum
        } else {
            Regime::DoubleMinimum
        }
    }

    /// Energy at which the two roots k² of the upper/lower quartic coalesce,
    /// `-1 - Ω²/4`. This is the double-minimum threshold when Ω < 2 and the
    /// minimum of the evanescent lower branch otherwise.
    pub fn root_coalescence(&self) -> f64 {
        -1.0 - 0.25 * self.omega * self.omega
    }

    /// Square-root branch point `-Ω²/4` of the non-quadratic branches.
    pub fn branch_point(&self) -> f64 {
        -0.25 * self.omega * self.omega
    }

    pub fn lowest_threshold(&self) -> f64 {
        match self.regime() {
            Regime::SingleMinimum => -self.omega,
            Regime::DoubleMinimum => self.root_coalescence(),
        }
    }

    /// Every energy at which the channel set degenerates, ordered top down.
    pub fn landmarks(&self) -> [(&'static str, f64); 5] {
        [
            ("upper threshold", self.omega),
            ("middle threshold", 0.0),
            ("lower band edge", -self.omega),
            ("branch point", self.branch_point()),
            ("root coalescence", self.root_coalescence()),
        ]
    }

    /// Fails with [`Error::DegenerateEnergy`] if `energy` is within `radius`
    /// of any landmark.
    pub fn check_energy(&self, energy: f64, radius: f64) -> Result<()> {
        for (landmark, at) in self.landmarks() {
            if (energy - at).abs() <= radius {
                return Err(Error::DegenerateEnergy {
                    energy,
                    landmark,
                    at,
                    radius,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    SingleMinimum,
    DoubleMinimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeInfo {
    pub regime: Regime,
    pub e_upper_threshold: f64,
    pub e_middle_threshold: f64,
    pub e_lowest_threshold: f64,
    pub e_branch_point: f64,
}

pub fn classify_regime(params: &SystemParams) -> Result<RegimeInfo> {
    params.validate()?;
    Ok(RegimeInfo {
        regime: params.regime(),
        e_upper_threshold: params.omega,
        e_middle_threshold: 0.0,
        e_lowest_threshold: params.lowest_threshold(),
        e_branch_point: params.branch_point(),
    })
}

/// Which open-channel window an energy falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpenRegion {
    /// Above the upper threshold: all three branches propagate.
    AllOpen,
    /// Between the middle and upper thresholds.
    UpperClosed,
    /// Between `-Ω` and 0: only the lower branch propagates.
    SingleOpen,
    /// Double-minimum window below `-Ω`: two lower-branch pairs propagate.
    DoubleMinimumWindow,
    /// Below the lowest threshold.
    AllClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub n_open: usize,
    pub n_closed: usize,
    pub region: OpenRegion,
}

pub fn channel_census(energy: f64, params: &SystemParams) -> Result<Census> {
    channel_census_with(energy, params, EPS_THRESHOLD)
}

pub fn channel_census_with(energy: f64, params: &SystemParams, radius: f64) -> Result<Census> {
    params.validate()?;
    params.check_energy(energy, radius)?;
    let omega = params.omega;
    let (n_open, region) = if energy > omega {
        (3, OpenRegion::AllOpen)
    } else if energy > 0.0 {
        (2, OpenRegion::UpperClosed)
    } else if energy > -omega {
        (1, OpenRegion::SingleOpen)
    } else if params.regime() == Regime::DoubleMinimum && energy > params.root_coalescence() {
        (2, OpenRegion::DoubleMinimumWindow)
    } else {
        (0, OpenRegion::AllClosed)
    };
    Ok(Census {
        n_open,
        n_closed: 3 - n_open,
        region,
    })
}
