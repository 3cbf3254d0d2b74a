//! Stationary two-body scattering of Raman-dressed, spin-orbit-coupled fermions
//! in one dimension with a singlet contact interaction.
//!
//! Units throughout: ħ = m = λ = 1. Energies are in ħ²λ²/m (which equals
//! ħ²λ²/2μ for the relative coordinate), wave vectors in λ, lengths in 1/λ and
//! the contact coupling in ħ²λ/m.
//!
//! The working spin space is the three-component reduced basis
//! (|S⟩, |T₁⟩, |T₂⟩); |T₃⟩ decouples at zero detuning in the centre-of-mass
//! frame.

pub mod dispersion;
pub mod error;
pub mod io;
pub mod params;
pub mod scattering;
pub mod spectra;

pub use dispersion::{Branch, BranchTag, ChannelSet, ChannelState, Kind, Placement};
pub use error::{Error, Result};
pub use params::{Census, Regime, RegimeInfo, SystemParams};
pub use scattering::{MatchingSystem, ScatteringResult};
pub use spectra::{BoundStateSpectrum, ResonanceCurve, ResonancePeak};

pub use num_complex::Complex64;
