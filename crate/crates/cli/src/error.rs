use std::path::PathBuf;

/// Exit status for malformed input: flags, partitions, specs, params files.
pub const EXIT_PARSE: i32 = 2;
/// Exit status when the core rejects a value (normalization, shapes, ranges).
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid partition {expr:?}: {reason}")]
    Partition { expr: String, reason: String },
    #[error("invalid state spec: {0}")]
    Spec(String),
    #[error("invalid params file: {0}")]
    Params(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] qmono_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(_) => EXIT_INVARIANT,
            _ => EXIT_PARSE,
        }
    }
}
