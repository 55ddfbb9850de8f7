//! Library side of the `svq` command-line tool: experiment configs and
//! manifests, the plain-text model format, PGM rendering, and the
//! subcommand implementations. The binary in `main.rs` is a thin clap
//! wrapper over [`commands`].

pub mod commands;
pub mod config;
pub mod model_file;
pub mod pgm;

/// A command failure with the exit code it maps to: 2 for bad input or
/// configuration, 3 for I/O failures, 1 for checks that ran and failed.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    pub fn failed(msg: impl Into<String>) -> Self {
        CliError::Failed(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Failed(_) => 1,
        }
    }
}
