use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants split into configuration problems (bad sizes, addresses,
/// parameters) and numerical-analysis problems; [`Error::is_numerical`]
/// tells them apart so front ends can map them to different exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("m must be ≥ 2 (got {0})")]
    LatticeTooSmall(usize),

    #[error("{field} = {value} is out of range [0, {bound})")]
    AddressOutOfRange {
        field: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("flat index {index} is out of range [0, {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("operation requires a {expected} state")]
    ModeMismatch { expected: &'static str },

    #[error("lattice mismatch: state has m = {found}, operator expects m = {expected}")]
    LatticeMismatch { expected: usize, found: usize },

    #[error("delta = {0} is outside [0, π/2)")]
    DeltaOutOfRange(f64),

    #[error("k = (0, 0) is degenerate for this quantity")]
    DegenerateK,

    #[error("max_steps = {given} is below the minimum window of {minimum} steps")]
    WindowTooShort { given: usize, minimum: usize },

    #[error("scaling fit needs at least {needed} distinct sizes, got {got}")]
    TooFewSizes { needed: usize, got: usize },

    #[error("scaling fit runs mix search modes")]
    MixedModes,

    #[error(
        "singular amplitude at k = ({k1}, {k2}): cos θ = {cos_theta:e} with numerator {numerator:e}"
    )]
    SingularAmplitude {
        k1: usize,
        k2: usize,
        cos_theta: f64,
        numerator: f64,
    },
}

impl Error {
    /// `true` for failures of the spectral analysis itself rather than of
    /// the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::SingularAmplitude { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
