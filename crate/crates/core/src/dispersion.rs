//! Dispersion branches, the six wave-vector solutions at a fixed energy and
//! the channel states built from them.
//!
//! The upper and lower branches share one quartic in k once the square root is
//! eliminated: `k⁴ − (2E+4)k² + (E² − Ω²) = 0`. Its two roots in k² are
//! `k²± = (E+2) ± √(4E+4+Ω²)`. For each root the effective square root
//! `s = (E − k²)/2` satisfies `s² = k² + Ω²/4`, and its sign decides the branch:
//! `Re s > 0` is the upper branch (or its continuation), `Re s < 0` the lower.
//! Both spinors are the same analytic expression evaluated at `±s`.

use std::f64::consts::SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::{self, Census, SystemParams, EPS_THRESHOLD};

/// Relative tolerance for treating a wave vector's imaginary part as zero.
pub const EPS_IMAG: f64 = 1e-10;

pub type Spinor = [Complex64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Upper,
    Middle,
    Lower,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Upper => "upper",
            Branch::Middle => "middle",
            Branch::Lower => "lower",
        }
    }
}

/// Branch plus whether the state lives on the analytic continuation of that
/// branch (non-real wave vector).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchTag {
    pub branch: Branch,
    pub continued: bool,
}

impl BranchTag {
    pub fn real(branch: Branch) -> Self {
        Self {
            branch,
            continued: false,
        }
    }
}

impl fmt::Display for BranchTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.continued {
            write!(f, "{}-cont", self.branch.name())
        } else {
            f.write_str(self.branch.name())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    /// Real wave vector.
    Propagating,
    /// Purely imaginary wave vector.
    Evanescent,
    /// Wave vector with nonzero real and imaginary parts.
    ComplexOscillatory,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Propagating => "propagating",
            Kind::Evanescent => "evanescent",
            Kind::ComplexOscillatory => "complex",
        }
    }
}

/// Where a state may appear in the piecewise solution around x = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Placement {
    OutgoingLeft,
    OutgoingRight,
    /// Decays as x → −∞ (`Im k < 0`).
    DecayingLeft,
    /// Decays as x → +∞ (`Im k > 0`).
    DecayingRight,
}

impl Placement {
    pub fn is_right(self) -> bool {
        matches!(self, Placement::OutgoingRight | Placement::DecayingRight)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelState {
    /// Channel label 1..=6. Odd labels live left of the contact, even labels right.
    pub label: usize,
    pub k: Complex64,
    pub branch: BranchTag,
    pub kind: Kind,
    /// Amplitudes on (|S⟩, |T₁⟩, |T₂⟩).
    pub spinor: Spinor,
    /// Probability flux; zero unless propagating.
    pub flux: f64,
    pub placement: Placement,
}

impl ChannelState {
    pub fn is_open(&self) -> bool {
        self.kind == Kind::Propagating
    }

    /// Right-moving propagating state, usable as an incident wave from the left.
    pub fn is_incoming_capable(&self) -> bool {
        self.is_open() && self.flux > 0.0
    }
}

/// The six stationary solutions at a common real energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub energy: f64,
    pub census: Census,
    states: [ChannelState; 6],
}

impl ChannelSet {
    /// State with the given label (1..=6).
    pub fn state(&self, label: usize) -> &ChannelState {
        &self.states[label - 1]
    }

    pub fn states(&self) -> &[ChannelState; 6] {
        &self.states
    }

    pub fn left_states(&self) -> impl Iterator<Item = &ChannelState> {
        self.states.iter().filter(|s| !s.placement.is_right())
    }

    pub fn right_states(&self) -> impl Iterator<Item = &ChannelState> {
        self.states.iter().filter(|s| s.placement.is_right())
    }

    pub fn open_labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.states.iter().filter(|s| s.is_open()).map(|s| s.label)
    }

    pub fn incoming_labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.states
            .iter()
            .filter(|s| s.is_incoming_capable())
            .map(|s| s.label)
    }
}

/// Complex branch energy. Upper/lower use the principal square root of
/// `4k² + Ω²`.
pub fn branch_energy(branch: Branch, k: Complex64, params: &SystemParams) -> Complex64 {
    let k2 = k * k;
    let root = (4.0 * k2 + params.omega * params.omega).sqrt();
    match branch {
        Branch::Upper => k2 + root,
        Branch::Middle => k2,
        Branch::Lower => k2 - root,
    }
}

/// Group-velocity flux of a real-k state.
pub fn flux(branch: Branch, k: f64, params: &SystemParams) -> f64 {
    let omega = params.omega;
    let soc = 4.0 * k / (4.0 * k * k + omega * omega).sqrt();
    match branch {
        Branch::Upper => 2.0 * k + soc,
        Branch::Middle => 2.0 * k,
        Branch::Lower => 2.0 * k - soc,
    }
}

/// Spinor of the given branch at (possibly complex) k, using the algebraic
/// normalisation continued analytically. Unit norm for real k.
pub fn spinor(branch: Branch, k: Complex64, params: &SystemParams) -> Spinor {
    let half = 0.5 * params.omega;
    let s = (k * k + half * half).sqrt();
    match branch {
        Branch::Upper => quartet_spinor(k, s, params.omega),
        Branch::Lower => quartet_spinor(k, -s, params.omega),
        Branch::Middle => middle_spinor(k, params.omega),
    }
}

/// `(−√2 k, −s − Ω/2, s − Ω/2) / 2s`; `s > 0` gives the upper spinor and
/// `s < 0` the lower one.
fn quartet_spinor(k: Complex64, s: Complex64, omega: f64) -> Spinor {
    let half = 0.5 * omega;
    let norm = 0.5 / s;
    [-SQRT_2 * k * norm, (-s - half) * norm, (s - half) * norm]
}

fn middle_spinor(k: Complex64, omega: f64) -> Spinor {
    let half = 0.5 * omega;
    let norm = (2.0 * (k * k + half * half)).sqrt().inv();
    [Complex64::from(-omega / SQRT_2) * norm, k * norm, k * norm]
}

/// One of the six raw solutions at energy E.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    pub k: Complex64,
    pub branch: BranchTag,
    /// Effective square root `(E − k²)/2` for quartet roots; unused for the
    /// middle pair.
    s: Complex64,
}

/// Roots in k² of the upper/lower quartic, returned as `(k²₋, k²₊)`, plus the
/// matching effective square roots `(s₋, s₊)`.
pub fn quartet_k_squared(energy: f64, omega: f64) -> ([Complex64; 2], [Complex64; 2]) {
    let b = energy + 2.0;
    let disc = 4.0 * energy + 4.0 + omega * omega;
    let product = energy * energy - omega * omega;
    let (minus, plus, sd) = if disc >= 0.0 {
        let sd = disc.sqrt();
        // Stable pair: the larger-magnitude root directly, the other from the product.
        let big = if b >= 0.0 { b + sd } else { b - sd };
        let small = if big != 0.0 { product / big } else { 0.0 };
        let (minus, plus) = if b >= 0.0 { (small, big) } else { (big, small) };
        (
            Complex64::from(minus),
            Complex64::from(plus),
            Complex64::from(sd),
        )
    } else {
        let sd = Complex64::new(0.0, (-disc).sqrt());
        (b - sd, b + sd, sd)
    };
    // E − k²± = −2 ∓ √disc, exactly.
    let s_minus = -1.0 + 0.5 * sd;
    let s_plus = -1.0 - 0.5 * sd;
    ([minus, plus], [s_minus, s_plus])
}

fn is_real(z: Complex64) -> bool {
    z.im.abs() < EPS_IMAG * z.norm().max(1.0)
}

fn is_imaginary(z: Complex64) -> bool {
    z.re.abs() < EPS_IMAG * z.norm().max(1.0)
}

/// All six wave vectors at real energy E, ordered as label pairs
/// (middle, k²₋ quartet pair, k²₊ quartet pair), each pair as (+k, −k).
pub fn solve_wavevectors(energy: f64, params: &SystemParams) -> Result<[WaveVector; 6]> {
    params.validate()?;
    params.check_energy(energy, EPS_THRESHOLD)?;
    Ok(wavevectors_unchecked(energy, params))
}

fn wavevectors_unchecked(energy: f64, params: &SystemParams) -> [WaveVector; 6] {
    let middle = Complex64::from(energy).sqrt();
    let middle_tag = BranchTag {
        branch: Branch::Middle,
        continued: energy < 0.0,
    };
    let ([k2_minus, k2_plus], [s_minus, s_plus]) = quartet_k_squared(energy, params.omega);
    let quartet = |k2: Complex64, s: Complex64| {
        let k = k2.sqrt();
        let branch = if s.re > 0.0 {
            Branch::Upper
        } else {
            Branch::Lower
        };
        let tag = BranchTag {
            branch,
            continued: !is_real(k),
        };
        (k, tag, s)
    };
    let (ka, ta, sa) = quartet(k2_minus, s_minus);
    let (kb, tb, sb) = quartet(k2_plus, s_plus);
    let zero = Complex64::from(0.0);
    let wv = |k: Complex64, branch: BranchTag, s: Complex64| WaveVector { k, branch, s };
    [
        wv(middle, middle_tag, zero),
        wv(-middle, middle_tag, zero),
        wv(ka, ta, sa),
        wv(-ka, ta, sa),
        wv(kb, tb, sb),
        wv(-kb, tb, sb),
    ]
}

fn make_state(label: usize, wv: WaveVector, params: &SystemParams) -> ChannelState {
    let kind = if is_real(wv.k) {
        Kind::Propagating
    } else if is_imaginary(wv.k) {
        Kind::Evanescent
    } else {
        Kind::ComplexOscillatory
    };
    let (k, spinor) = match wv.branch.branch {
        Branch::Middle => (wv.k, middle_spinor(wv.k, params.omega)),
        _ => (wv.k, quartet_spinor(wv.k, wv.s, params.omega)),
    };
    let (k, flux, placement) = if kind == Kind::Propagating {
        let k = Complex64::from(k.re);
        let v = flux(wv.branch.branch, k.re, params);
        let placement = if v > 0.0 {
            Placement::OutgoingRight
        } else {
            Placement::OutgoingLeft
        };
        (k, v, placement)
    } else {
        let placement = if k.im > 0.0 {
            Placement::DecayingRight
        } else {
            Placement::DecayingLeft
        };
        (k, 0.0, placement)
    };
    ChannelState {
        label,
        k,
        branch: wv.branch,
        kind,
        spinor,
        flux,
        placement,
    }
}

/// Builds the labelled channel set at energy E.
///
/// Labels come in pairs: (1, 2) middle branch, (3, 4) the k²₋ quartet root,
/// (5, 6) the k²₊ quartet root. Within a pair the even label is the
/// right-moving or right-decaying member. Above `-Ω` the (3, 4) pair is the
/// upper branch or its continuation; in the double-minimum window it is the
/// inner lower-branch pair, so label 4 is the positive-flux state with a
/// negative wave vector.
pub fn build_channel_set(energy: f64, params: &SystemParams) -> Result<ChannelSet> {
    build_channel_set_with(energy, params, EPS_THRESHOLD)
}

/// As [`build_channel_set`] with an explicit landmark exclusion radius.
pub fn build_channel_set_with(
    energy: f64,
    params: &SystemParams,
    radius: f64,
) -> Result<ChannelSet> {
    let census = params::channel_census_with(energy, params, radius)?;
    let roots = wavevectors_unchecked(energy, params);
    let mut states = [make_state(0, roots[0], params); 6];
    for pair in 0..3 {
        let a = make_state(0, roots[2 * pair], params);
        let b = make_state(0, roots[2 * pair + 1], params);
        let (right, left) = if a.placement.is_right() {
            (a, b)
        } else {
            (b, a)
        };
        debug_assert!(right.placement.is_right() && !left.placement.is_right());
        states[2 * pair] = ChannelState {
            label: 2 * pair + 1,
            ..left
        };
        states[2 * pair + 1] = ChannelState {
            label: 2 * pair + 2,
            ..right
        };
    }
    Ok(ChannelSet {
        energy,
        census,
        states,
    })
}
