use std::path::PathBuf;

use cbqsdc_core::metrics::MetricsError;
use cbqsdc_core::protocol::{ConfigError, ProtocolError};
use thiserror::Error;

use crate::transcript_io::TranscriptIoError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Transcript(#[from] TranscriptIoError),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 1 for anything the caller can fix, 2 for internal verification
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Argument(_) | CliError::Io { .. } => 1,
            CliError::Transcript(_) | CliError::Metrics(_) => 1,
            CliError::Protocol(ProtocolError::Config(_)) => 1,
            CliError::Protocol(_) | CliError::Verification(_) => 2,
        }
    }
}
