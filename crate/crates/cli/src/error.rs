use std::io;
use std::path::PathBuf;

use lattice_approx::Error as CoreError;

pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_DECODE: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: io::Error },

    #[error("{}: not valid UTF-8 (first bad byte at offset {offset})", path.display())]
    Decode { path: PathBuf, offset: usize },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::File { .. } | CliError::Io(_) => EXIT_IO,
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(_) => EXIT_IO,
                _ => EXIT_RUNTIME,
            },
            CliError::Decode { .. } => EXIT_DECODE,
            CliError::Core(e) => match e {
                CoreError::InvalidParameter(_)
                | CoreError::InvalidPattern(_)
                | CoreError::InvalidSample(_)
                | CoreError::BackingUnsupported { .. } => EXIT_USAGE,
                CoreError::Decode { .. } => EXIT_DECODE,
                CoreError::Io(_) => EXIT_IO,
                CoreError::OracleMismatch | CoreError::EngineMismatch(_) | CoreError::Format(_) => {
                    EXIT_RUNTIME
                }
            },
        }
    }

    /// Writes to a closed pipe are not reported.
    pub fn is_broken_pipe(&self) -> bool {
        let io = match self {
            CliError::Io(e) => Some(e),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            },
            _ => None,
        };
        io.is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
    }
}
