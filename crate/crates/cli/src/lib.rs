//! Library half of the command-line tool: document formats, subcommand
//! implementations, and the experiment driver. The binary in `main.rs` is
//! a thin argument-parsing wrapper.

pub mod commands;
pub mod docs;
pub mod experiment;

use sosgram::error::ErrorClass;

/// Errors surfaced by the CLI, mapped onto process exit codes:
/// 1 malformed input, 2 mathematical precondition violated (a witness is
/// printed), 3 internal invariant failure.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Document(String),

    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] sosgram::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Document(_) | CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core(err) => match err.class() {
                ErrorClass::MalformedInput => 1,
                ErrorClass::PreconditionViolated => 2,
                ErrorClass::InternalBug => 3,
            },
        }
    }

    /// One-line JSON rendering for stderr; precondition violations carry
    /// their machine-checkable witness.
    pub fn to_json(&self) -> String {
        use serde_json::{json, Value};
        let mut obj = json!({ "error": self.to_string() });
        if let CliError::Core(err) = self {
            let extra: Option<(&str, Value)> = match err {
                sosgram::Error::NotPsd { witness } => Some((
                    "witness",
                    Value::Array(
                        witness
                            .iter()
                            .map(|r| Value::String(r.to_string()))
                            .collect(),
                    ),
                )),
                sosgram::Error::FactorGramNotPsd { witness, .. } => Some((
                    "witness",
                    Value::Array(
                        witness
                            .iter()
                            .map(|r| Value::String(r.to_string()))
                            .collect(),
                    ),
                )),
                sosgram::Error::NotNonnegative {
                    witness_point: Some(point),
                    ..
                } => Some((
                    "witness_point",
                    Value::Array(vec![
                        Value::String(point.0.to_string()),
                        Value::String(point.1.to_string()),
                    ]),
                )),
                _ => None,
            };
            if let Some((key, value)) = extra {
                obj.as_object_mut()
                    .expect("object literal")
                    .insert(key.to_string(), value);
            }
        }
        obj.to_string()
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_file(path: &std::path::Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
