//! Library side of the `impurity-thermo` binary: configuration, the
//! `spectra`, `thermo` and `verify` commands, and their output formats.

pub mod config;
pub mod format;
pub mod spectra;
pub mod table;
pub mod verify;

pub use config::{Provider, RunConfig, StatSelection};

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("non-finite value produced by {0}")]
    NonFinite(String),
    #[error("numerical error in {op}: {source}")]
    Numerics {
        op: &'static str,
        #[source]
        source: impurity_thermo_core::Error,
    },
}

pub(crate) fn numerics(op: &'static str) -> impl FnOnce(impurity_thermo_core::Error) -> CliError {
    move |source| CliError::Numerics { op, source }
}
