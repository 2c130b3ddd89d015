use std::path::PathBuf;

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    /// A config key is missing, malformed or inconsistent.
    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {reason}")]
    Write { path: PathBuf, reason: String },
    #[error("numerical failure: {0}")]
    Numerical(#[from] pvn_core::Error),
    #[error("accuracy gate failed: {0}")]
    AccuracyGate(String),
}

impl BenchError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn write(path: impl Into<PathBuf>, reason: impl ToString) -> Self {
        Self::Write {
            path: path.into(),
            reason: reason.to_string(),
        }
    }

    /// 2 config, 3 numerical, 4 accuracy gate, 1 output I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } | Self::Read { .. } => 2,
            Self::Numerical(e) if is_input_error(e) => 2,
            Self::Numerical(_) => 3,
            Self::AccuracyGate(_) => 4,
            Self::Write { .. } => 1,
        }
    }
}

/// Core errors that can only come from bad parameters, not from the numerics.
fn is_input_error(e: &pvn_core::Error) -> bool {
    use pvn_core::Error as E;
    matches!(
        e,
        E::InvalidArgument { .. } | E::LatticeMismatch { .. } | E::TooManyLevels { .. }
    )
}
