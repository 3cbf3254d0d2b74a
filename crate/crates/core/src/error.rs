use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("energy {energy} lies within {radius:e} of the {landmark} at {at}")]
    DegenerateEnergy {
        energy: f64,
        landmark: &'static str,
        at: f64,
        radius: f64,
    },

    #[error("channel {label} is not an incoming channel at E = {energy}")]
    ClosedIncidentChannel { label: usize, energy: f64 },

    #[error("matching system is singular (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("window [{lo}, {hi}] is not inside a single-open-channel region")]
    WindowMismatch { lo: f64, hi: f64 },

    #[error("configuration: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SingularSystem { .. } | Error::Io(_) => 1,
            _ => 2,
        }
    }
}
