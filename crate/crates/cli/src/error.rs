use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

/// Runtime failure of a stage. Usage errors are reported by clap before any
/// stage runs.
#[derive(Debug)]
pub enum CliError {
    Io { path: PathBuf, source: io::Error },
    Core { path: Option<PathBuf>, source: revexp_core::Error },
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        use revexp_core::Error as E;
        match self {
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Core { source, .. } => match source {
                E::Parse { .. } => "parse",
                E::Schema { .. } => "schema",
                E::DuplicateKey { .. } => "duplicate_key",
                E::InvalidArgument(_) => "invalid_argument",
                E::Precondition(_) => "precondition",
                E::Degenerate(_) => "degenerate",
                E::Training(_) => "training",
                E::Comment { .. } => "comment",
                E::Io(_) => "io",
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let mut value = json!({ "error": self.to_string(), "kind": self.kind() });
        let path = match self {
            CliError::Io { path, .. } => Some(path),
            CliError::Core { path, .. } => path.as_ref(),
            CliError::Usage(_) => None,
        };
        if let Some(path) = path {
            value["path"] = Value::from(path.display().to_string());
        }
        value
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Core { path: Some(path), source } => write!(f, "{}: {source}", path.display()),
            CliError::Core { path: None, source } => write!(f, "{source}"),
            CliError::Usage(message) => f.write_str(message),
        }
    }
}

impl From<revexp_core::Error> for CliError {
    fn from(source: revexp_core::Error) -> Self {
        CliError::Core { path: None, source }
    }
}

/// Attaches the offending file to core errors.
pub trait AtPath<T> {
    fn at(self, path: &Path) -> Result<T, CliError>;
}

impl<T> AtPath<T> for revexp_core::Result<T> {
    fn at(self, path: &Path) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { path: Some(path.to_path_buf()), source })
    }
}
