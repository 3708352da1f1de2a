use thiserror::Error;

/// Errors raised by the modeling pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrlhError {
    /// A geometric or physical invariant does not hold.
    #[error("invalid {what}: {reason}")]
    InvalidInput { what: &'static str, reason: String },

    /// Argument outside the domain of a closed-form expression.
    #[error("domain error in {function}: {reason}")]
    Domain { function: &'static str, reason: String },

    /// The wave is guided (|beta| > k0) and does not radiate.
    #[error("slow wave: |beta| = {beta:.6e} rad/m exceeds k0 = {k0:.6e} rad/m")]
    SlowWave { beta: f64, k0: f64 },

    /// No sign change of the phase constant inside the bracket.
    #[error("no sign change of beta between {f_lo:.6e} Hz and {f_hi:.6e} Hz")]
    Bracketing { f_lo: f64, f_hi: f64 },

    /// Network evaluation produced a non-finite entry.
    #[error("network pole at {frequency:.6e} Hz")]
    Pole { frequency: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{fingers}-finger state: {source}")]
    State {
        fingers: u32,
        #[source]
        source: Box<CrlhError>,
    },
}

pub type Result<T> = std::result::Result<T, CrlhError>;

pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> CrlhError {
    CrlhError::InvalidInput {
        what,
        reason: reason.into(),
    }
}
