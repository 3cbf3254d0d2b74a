//! Run configuration: command-line values layered over a key=value file.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::io::table::Format;
use crate::params::SystemParams;
use crate::scattering::SWEEP_EXCLUSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Dispersion,
    Scatter,
    Resonances,
    BoundStates,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::Scatter => "scatter",
            Command::Resonances => "resonances",
            Command::BoundStates => "bound-states",
        }
    }
}

/// Every optional setting. Used both for parsed config files and for
/// command-line overrides.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub omega: Option<f64>,
    pub g: Option<f64>,
    pub incident: Option<usize>,
    pub emin: Option<f64>,
    pub emax: Option<f64>,
    pub steps: Option<usize>,
    pub gmin: Option<f64>,
    pub gmax: Option<f64>,
    pub gsteps: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub exclusion: Option<f64>,
    pub no_meta: Option<bool>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{key}` value `{value}`")))
}

impl PartialConfig {
    /// Parses `key = value` lines; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected key=value, got `{line}`",
                    lineno + 1
                ))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "omega" => cfg.omega = Some(parse_value(&key, value)?),
                "g" => cfg.g = Some(parse_value(&key, value)?),
                "incident" => cfg.incident = Some(parse_value(&key, value)?),
                "emin" => cfg.emin = Some(parse_value(&key, value)?),
                "emax" => cfg.emax = Some(parse_value(&key, value)?),
                "steps" => cfg.steps = Some(parse_value(&key, value)?),
                "gmin" => cfg.gmin = Some(parse_value(&key, value)?),
                "gmax" => cfg.gmax = Some(parse_value(&key, value)?),
                "gsteps" => cfg.gsteps = Some(parse_value(&key, value)?),
                "out" => cfg.out = Some(PathBuf::from(value)),
                "format" => cfg.format = Some(value.parse()?),
                "exclusion" => cfg.exclusion = Some(parse_value(&key, value)?),
                "no-meta" => cfg.no_meta = Some(parse_value(&key, value)?),
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    /// Values set in `over` win.
    pub fn overlay(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            omega: over.omega.or(self.omega),
            g: over.g.or(self.g),
            incident: over.incident.or(self.incident),
            emin: over.emin.or(self.emin),
            emax: over.emax.or(self.emax),
            steps: over.steps.or(self.steps),
            gmin: over.gmin.or(self.gmin),
            gmax: over.gmax.or(self.gmax),
            gsteps: over.gsteps.or(self.gsteps),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
            exclusion: over.exclusion.or(self.exclusion),
            no_meta: over.no_meta.or(self.no_meta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Grid {
    /// Inclusive uniform grid; a single step yields `min`.
    pub fn points(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.min],
            n => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: SystemParams,
    pub incident: usize,
    pub energy: Option<Grid>,
    pub couplings: Option<Grid>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub exclusion: f64,
    pub no_meta: bool,
}

pub const DEFAULT_STEPS: usize = 1000;
pub const DEFAULT_GSTEPS: usize = 20;
pub const DEFAULT_G: f64 = -1.0;
pub const DEFAULT_INCIDENT: usize = 6;

fn required<T>(value: Option<T>, field: &str, command: Command) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("`{field}` is required for {}", command.name())))
}

fn finite(value: f64, field: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Config(format!(
            "`{field}` must be finite, got {value}"
        )))
    }
}

impl RunConfig {
    pub fn resolve(command: Command, cfg: PartialConfig) -> Result<Self> {
        let omega = required(cfg.omega, "omega", command)?;
        let params = SystemParams::new(omega, cfg.g.unwrap_or(DEFAULT_G))?;
        let energy = match command {
            Command::Dispersion | Command::Scatter => {
                let min = finite(required(cfg.emin, "emin", command)?, "emin")?;
                let max = finite(required(cfg.emax, "emax", command)?, "emax")?;
                if max < min {
                    return Err(Error::Config(format!("emax ({max}) < emin ({min})")));
                }
                Some(Grid {
                    min,
                    max,
                    steps: cfg.steps.unwrap_or(DEFAULT_STEPS),
                })
            }
            _ => None,
        };
        let couplings = match command {
            Command::Resonances | Command::BoundStates => {
                let min = finite(required(cfg.gmin, "gmin", command)?, "gmin")?;
                let max = finite(required(cfg.gmax, "gmax", command)?, "gmax")?;
                if max < min {
                    return Err(Error::Config(format!("gmax ({max}) < gmin ({min})")));
                }
                Some(Grid {
                    min,
                    max,
                    steps: cfg.gsteps.unwrap_or(DEFAULT_GSTEPS),
                })
            }
            _ => None,
        };
        let incident = cfg.incident.unwrap_or(DEFAULT_INCIDENT);
        if !(1..=6).contains(&incident) {
            return Err(Error::Config(format!(
                "`incident` must be in 1..=6, got {incident}"
            )));
        }
        let exclusion = cfg.exclusion.unwrap_or(SWEEP_EXCLUSION);
        if !(exclusion.is_finite() && exclusion >= 0.0) {
            return Err(Error::Config(format!(
                "`exclusion` must be >= 0, got {exclusion}"
            )));
        }
        Ok(Self {
            command,
            params,
            incident,
            energy,
            couplings,
            out: cfg.out,
            format: cfg.format.unwrap_or_default(),
            exclusion,
            no_meta: cfg.no_meta.unwrap_or(false),
        })
    }
}
