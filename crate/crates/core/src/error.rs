use thiserror::Error;

use crate::graph::{Simplex, Vertex};
use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(Vertex),

    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("level {level} is attained by the function at vertex {vertex}")]
    LevelHitsVertex { vertex: Vertex, level: Rational },

    #[error("{constraints} constraints exceed the graph dimension {dim}")]
    DimensionExceeded { constraints: usize, dim: usize },

    #[error("function takes equal values on the edge ({0}, {1})")]
    NotLocallyInjective(Vertex, Vertex),

    #[error("function ties on the simplex {0}")]
    TieOnSimplex(Simplex),

    #[error("no function value for vertex {0}")]
    MissingValue(Vertex),

    #[error("graph is not a 2-graph, no surface triangles")]
    NotASurface,

    #[error("stage {stage}: level {value} is a value of the extended function")]
    IncompatibleLevel { stage: usize, value: Rational },

    #[error("stage {stage}: extended function is constant")]
    ConstantExtension { stage: usize },

    #[error("stage {stage}: level set is empty")]
    EmptyStage { stage: usize },

    #[error("cannot parse polynomial: {0}")]
    UnparsablePolynomial(String),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    #[error("eigenvector vanishes at vertex {0}")]
    ZeroOnVertex(Vertex),

    #[error("graph has no vertex coordinates")]
    MissingCoordinates,

    #[error("document error at {field}: {message}")]
    Document { field: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn document(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Document { field: field.into(), message: message.into() }
    }
}
