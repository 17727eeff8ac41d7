use thiserror::Error;

/// Errors produced by graph loading, parameter validation and the exact searches.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("instance too large for exact mode: {0}")]
    TooLarge(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("parity mismatch: path length {length} between {u} and {v} contradicts the bipartition (class {class})")]
    Parity {
        u: usize,
        v: usize,
        length: usize,
        class: u8,
    },

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("vertices {0} and {1} lie in different components")]
    Disconnected(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::EmptyGraph => "empty-graph",
            Error::VertexOutOfRange { .. } => "vertex-out-of-range",
            Error::NotApplicable(_) => "not-applicable",
            Error::TooLarge(_) => "too-large",
            Error::Domain(_) => "domain",
            Error::Parity { .. } => "parity",
            Error::NotBipartite => "not-bipartite",
            Error::Disconnected(..) => "disconnected",
        }
    }
}
