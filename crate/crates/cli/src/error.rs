use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] propg_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("no cache directory: set PROPG_CACHE")]
    NoCacheDir,
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub mod exit {
    pub const USAGE: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const PRECISION: i32 = 4;
    pub const INVALID: i32 = 5;
    pub const IO: i32 = 6;
    pub const INTERNAL: i32 = 70;
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use propg_core::Error as E;
        match self {
            CliError::Core(E::Budget { .. } | E::TruncationDepth { .. }) => exit::BUDGET,
            CliError::Core(E::Precision { .. } | E::ModulusTooLarge { .. }) => exit::PRECISION,
            CliError::Core(
                E::NotOddPrime(_) | E::NotUnit(..) | E::InvalidArgument(_) | E::MixedDegrees { .. },
            ) => exit::INVALID,
            CliError::Core(_) => exit::INTERNAL,
            CliError::Io { .. } | CliError::Csv(_) | CliError::NoCacheDir => exit::IO,
            CliError::Json(_) => exit::INTERNAL,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            exit::BUDGET => "budget",
            exit::PRECISION => "precision",
            exit::INVALID => "invalid-argument",
            exit::IO => "io",
            _ => "internal",
        }
    }
}
