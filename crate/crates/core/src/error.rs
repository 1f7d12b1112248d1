use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("not a quadrangulation: {0}")]
    NotQuadrangulation(String),
    #[error("operation undefined on the vertex map")]
    VertexMap,
    #[error("block of size {found} attached to a node of outdegree {degree}")]
    SizeMismatch { degree: u32, found: u32 },
    #[error("invalid block tree: {0}")]
    InvalidTree(String),
    #[error("n = {n} exceeds the solved range (max {max})")]
    Unsolved { n: u32, max: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("method {method} is not available for {reason}")]
    MethodUnavailable { method: &'static str, reason: String },
    #[error("gave up after {0} rejections")]
    RejectionLimit(u64),
    #[error("exact diameter refused for {0} edges; use the estimate")]
    TooLarge(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("fit needs at least {need} usable points, got {got}")]
    Degenerate { need: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
