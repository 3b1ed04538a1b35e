use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} must be non-negative, got {value}")]
    Negative { what: &'static str, value: i64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid orbital: {0}")]
    InvalidOrbital(String),

    #[error("unsupported quantum numbers n={n}, l={l} (supported: n <= 5, l <= 4)")]
    Unsupported { n: u32, l: u32 },

    #[error("triangle inequality violated: r_a={ra}, r_b={rb}, R={r}")]
    Triangle { ra: f64, rb: f64, r: f64 },

    #[error("series for {0} did not converge within its term cap")]
    SeriesCap(&'static str),

    #[error("orbital centers do not match the {0} pattern")]
    CenterMismatch(&'static str),

    #[error(
        "mu-series not converged at muMax={mu_max}: partial sum {partial:e}, last term {last_term:e}"
    )]
    NonConvergence { mu_max: u32, partial: f64, last_term: f64 },

    #[error("prefactor forms disagree: {direct:e} vs {identity:e}")]
    PrefactorMismatch { direct: f64, identity: f64 },

    #[error("quadrature tolerance not reached: value {value:e}, error estimate {error:e}")]
    Quadrature { value: f64, error: f64 },

    #[error("working precision exhausted at {bits} bits")]
    Precision { bits: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
