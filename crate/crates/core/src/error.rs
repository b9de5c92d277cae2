use crate::Vertex;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph on {count} vertices")]
    InvalidVertex { vertex: Vertex, count: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A joined component exceeded the caller's diameter cap.
    #[error("join produced a component of diameter {diameter} (cap {cap}) containing vertex {witness}")]
    UnboundedComponent {
        witness: Vertex,
        diameter: String,
        cap: usize,
    },

    #[error("vertex {0} is not covered by any packing of the multipacking")]
    Uncovered(Vertex),

    #[error("tile improvement failed: covered {achieved} of the tile, needed {required}")]
    ImprovementFailed {
        tile: Vec<Vertex>,
        achieved: String,
        required: String,
    },

    #[error("calibration failed for epsilon {epsilon}: {log}")]
    Calibration { epsilon: String, log: String },

    #[error("mediator budget exceeded: {needed} mediators needed, budget {budget}")]
    MediatorBudget { needed: usize, budget: usize },

    #[error("no marker count fits strictly between eps|T|/10 and eps|T|/5 for tile of size {size} starting at vertex {first}")]
    MarkerConstruction { first: Vertex, size: usize },

    #[error("audit failed: {0}")]
    AuditFailed(String),

    #[error("schedule violated at level {level}: {detail}")]
    Schedule { level: usize, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
