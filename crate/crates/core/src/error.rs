//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument left the domain of the operation.
    #[error("{name} = {value} outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// An iteration failed to converge within its budget.
    #[error("{context}: no convergence after {iterations} iterations")]
    Convergence {
        context: &'static str,
        iterations: u64,
    },

    /// The requested operation does not apply to this cut kind.
    #[error("{0}")]
    UnsupportedCut(&'static str),

    /// The cut derivative diverges at the requested point.
    #[error("cut derivative diverges at t = {at}")]
    DerivativeDiverges { at: f64 },

    /// A tower level beyond the built depth was requested.
    #[error("level {level} out of range: tower holds levels below {depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    /// Too few usable points for a fit.
    #[error("power-law fit needs at least {needed} positive points in the window, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    /// A direct orbit search ran past its iteration cap.
    #[error("orbit search exceeded the cap of {cap} iterations")]
    IterationCap { cap: u64 },

    /// Cell count above the Ulam memory guard.
    #[error("cell count {cells} exceeds the memory guard of {guard}")]
    TooManyCells { cells: usize, guard: usize },

    /// Malformed configuration value.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub(crate) fn check_unit_closed<T: crate::Real>(name: &'static str, v: T) -> Result<()> {
    if v >= T::zero() && v <= T::one() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: v.as_f64(),
            domain: "[0, 1]",
        })
    }
}

pub(crate) fn check_unit_half_open<T: crate::Real>(name: &'static str, v: T) -> Result<()> {
    if v >= T::zero() && v < T::one() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: v.as_f64(),
            domain: "[0, 1)",
        })
    }
}
