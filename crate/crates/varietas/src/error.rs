use std::path::PathBuf;

use varietas_core::construction::ConstructionError;
use varietas_core::engine::EngineError;
use varietas_core::transversal::TransversalError;

#[derive(Debug, thiserror::Error)]
pub enum WorkbenchError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {what}: {source}")]
    Parse { what: String, source: serde_json::Error },
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Transversal(#[from] TransversalError),
}

impl WorkbenchError {
    /// A suggestion printed alongside the error, when one applies.
    pub fn hint(&self) -> Option<&'static str> {
        match self {
            WorkbenchError::Engine(EngineError::CarrierTooSmall { .. })
            | WorkbenchError::Construction(ConstructionError::Engine(EngineError::CarrierTooSmall {
                ..
            })) => Some("raise the carrier padding with --pad"),
            WorkbenchError::Engine(EngineError::ClosureTooLarge { .. }) => Some("raise --limit"),
            WorkbenchError::Construction(ConstructionError::InvariantViolation { .. }) => {
                Some("the plan does not leave enough arity headroom; regenerate it with `varietas plan`")
            }
            WorkbenchError::Usage(_) => Some("see `varietas --help`"),
            WorkbenchError::Parse { .. } | WorkbenchError::Schema(_) => {
                Some("check the file against the documents written by the matching subcommand")
            }
            _ => None,
        }
    }
}
