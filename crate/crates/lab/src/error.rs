use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("{0}")]
    Config(String),

    #[error("{stage}: {source}")]
    Core {
        stage: String,
        #[source]
        source: ngd_core::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl LabError {
    pub fn config(msg: impl Into<String>) -> Self {
        LabError::Config(msg.into())
    }

    /// Process exit code: 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            LabError::Core { source, .. } if source.is_validation() => 2,
            LabError::Core { .. } => 3,
            LabError::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;

/// Attach a stage label to core errors.
pub trait Context<T> {
    fn stage(self, stage: impl Into<String>) -> Result<T>;
}

impl<T> Context<T> for ngd_core::Result<T> {
    fn stage(self, stage: impl Into<String>) -> Result<T> {
        self.map_err(|source| LabError::Core {
            stage: stage.into(),
            source,
        })
    }
}
