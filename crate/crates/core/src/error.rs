use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidType(String),
    #[error("bad root label {label:?} for {kind}: {reason}")]
    BadLabel { kind: String, label: String, reason: String },
    #[error("invalid node set: {0}")]
    InvalidNodes(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("element not in piece {piece}: {detail}")]
    OutsidePiece { piece: usize, detail: String },
    #[error("no sl2-triple found for {0}")]
    NoTriple(String),
    #[error("dataset error at {location}: {reason}")]
    Dataset { location: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
