use thiserror::Error;

/// Errors raised by the decomposition library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// A parameter set violates its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A binary event is not a flat union of atoms.
    #[error("malformed event: {0}")]
    MalformedEvent(String),

    /// Finite-difference step produced an energy change too small to resolve.
    #[error("degenerate finite-difference step: energy change {delta_e:e} erg")]
    DegenerateStep { delta_e: f64 },

    /// A statistic was requested from an empty sample.
    #[error("empty sample batch")]
    EmptyBatch,

    /// The kinetic relaxation could not be set up.
    #[error("kinetic relaxation: {0}")]
    Relaxation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
