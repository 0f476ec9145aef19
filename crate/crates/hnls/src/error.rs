//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A grid is too coarse to resolve the requested frequency band
    /// without aliasing.
    #[error("grid with {m} points per dimension cannot resolve half-width {half_width} (need at least {required})")]
    GridTooSmall {
        m: usize,
        half_width: u32,
        required: usize,
    },

    /// `lp_spatial_norm` only has an exact quadrature identity for even
    /// exponents.
    #[error("spatial L^p norm requires a positive even exponent, got {0}")]
    OddExponent(u32),

    /// The divisor-based counter is undefined at level zero (infinitely
    /// many factorizations of 0).
    #[error("level l = 0 has no divisor enumeration; use the closed form")]
    ZeroLevel,

    /// A frequency lies outside the declared box `(-N, N]²`.
    #[error("frequency ({n1}, {n2}) outside the box (-{half_width}, {half_width}]^2")]
    OutOfBox { n1: i64, n2: i64, half_width: u32 },

    /// An operation that normalizes by a norm received the zero field.
    #[error("operation undefined for the zero field")]
    ZeroField,

    /// Invalid run configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The solver produced a non-finite sample.
    #[error("non-finite field value at t = {time}")]
    NonFinite { time: f64 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
}
