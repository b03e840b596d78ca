use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    /// `line` and `column` are 1-based; `context` is the offending source line.
    #[error("{origin}:{line}:{column}: {message}\n  | {context}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
        context: String,
    },

    #[error("`{field}` = {value} is invalid: {requirement}")]
    Invalid {
        field: String,
        value: String,
        requirement: String,
    },

    #[error(
        "unknown preset `{0}` (available: fig2a, fig2b, fig3a, fig3b, fig4, fig5, fig7, fig8)"
    )]
    UnknownPreset(String),

    #[error("preset `{preset}` is a `{expected}` recipe, not `{requested}`")]
    WrongCommand {
        preset: String,
        expected: String,
        requested: String,
    },

    #[error("either --config or --preset is required")]
    NoInput,
}

impl ConfigError {
    pub(crate) fn invalid(
        field: impl Into<String>,
        value: impl ToString,
        requirement: impl Into<String>,
    ) -> Self {
        Self::Invalid {
            field: field.into(),
            value: value.to_string(),
            requirement: requirement.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ChartError {
    #[error("chart `{0}` has no data")]
    Empty(String),

    #[error("column `{0}` not found")]
    MissingColumn(String),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("numerical failure at {context}: {source}")]
    Numerical {
        context: String,
        source: polaron_core::Error,
    },

    #[error(transparent)]
    Chart(#[from] ChartError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error("{path}: malformed table: {message}")]
    Table { path: PathBuf, message: String },
}

impl SimError {
    pub(crate) fn numerical(context: impl Into<String>, source: polaron_core::Error) -> Self {
        Self::Numerical {
            context: context.into(),
            source,
        }
    }

    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) => 2,
            SimError::Numerical {
                source: polaron_core::Error::Param(_),
                ..
            } => 2,
            SimError::Numerical { .. } => 3,
            SimError::Chart(_)
            | SimError::Io { .. }
            | SimError::Csv { .. }
            | SimError::Table { .. } => 1,
        }
    }
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
