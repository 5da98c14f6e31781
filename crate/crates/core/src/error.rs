use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular load: shunt impedance is zero")]
    SingularLoad,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("unknown cell id {0}")]
    UnknownCell(usize),

    #[error("singular admittance matrix at frequency index {index}")]
    SingularMatrix { index: usize },

    #[error("sectors do not partition the cells: {0}")]
    Partition(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl SimError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SimError::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
