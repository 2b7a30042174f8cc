use std::path::PathBuf;

use thiserror::Error;

use crate::space::ValidationError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("invalid map: {0}")]
    Map(String),
    #[error("invalid chain: {0}")]
    Chain(String),
    #[error("invalid action: {0}")]
    Action(String),
    #[error("invalid tower: {0}")]
    Tower(String),
    #[error("invalid instance spec: {0}")]
    Spec(String),
    #[error("rips complex would exceed {cap} simplices")]
    RipsCap { cap: usize },
    #[error("group order exceeds cap of {cap}")]
    GroupCap { cap: usize },
    #[error("function space has {size} points, above the cap of {cap}; restrict the carrier to the image of phi")]
    CarrierCap { size: f64, cap: usize },
    #[error("structures are over different carriers ({0} vs {1} points)")]
    CarrierMismatch(usize, usize),
    #[error("integer overflow during elimination")]
    Overflow,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
