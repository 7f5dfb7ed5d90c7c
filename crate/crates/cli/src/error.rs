use std::path::PathBuf;

use thiserror::Error;

/// Exit status for a config that cannot be read, parsed or validated, and for
/// output that cannot be written.
pub const EXIT_INVALID_INPUT: u8 = 2;
/// Exit status for a failure inside the numerics.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },

    #[error("invalid config at `{field}`: {message}")]
    Config { field: String, message: String },

    /// A config value rejected by the library while building the scenario.
    #[error("invalid config at `{field}`: {source}")]
    Model { field: String, source: corrwitness::Error },

    #[error("numerical failure: {0}")]
    Numerical(#[from] corrwitness::Error),
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config { field: field.into(), message: message.into() }
    }

    /// Errors that come from the numerics rather than from the input map to
    /// [`EXIT_NUMERICAL`] even when they surface while loading.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Numerical(_) => EXIT_NUMERICAL,
            Self::Model { source, .. } if is_numerical(source) => EXIT_NUMERICAL,
            _ => EXIT_INVALID_INPUT,
        }
    }
}

fn is_numerical(err: &corrwitness::Error) -> bool {
    use corrwitness::Error::*;
    matches!(err, NotHermitian { .. } | BoundViolation { .. } | DimensionTooLarge { .. } | ConvergenceFailure { .. })
}

/// Attaches the config field that produced a library error.
pub trait FieldContext<T> {
    fn field(self, field: &str) -> Result<T, CliError>;
}

impl<T> FieldContext<T> for corrwitness::Result<T> {
    fn field(self, field: &str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Model { field: field.to_owned(), source })
    }
}
