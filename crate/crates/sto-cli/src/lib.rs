//! Job files, result records and threaded oracle evaluation behind the `sto` binary.

pub mod job;
pub mod parallel;
pub mod report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] sto_core::Error),
}

impl CliError {
    /// Process exit status: 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> u8 {
        use sto_core::Error as E;
        match self {
            CliError::Core(E::NonConvergence { .. } | E::SeriesCap(_) | E::Precision { .. } | E::Quadrature { .. }) => 3,
            _ => 2,
        }
    }
}
