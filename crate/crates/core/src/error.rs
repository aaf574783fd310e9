use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph has a directed cycle through vertex `{0}`; its free category is infinite")]
    CyclicGraph(String),
    #[error("{what} exceeded the configured bound of {bound}")]
    BoundExceeded { what: String, bound: usize },
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("endpoint mismatch on `{arrow}`: {detail}")]
    Endpoint { arrow: String, detail: String },
    #[error("functoriality fails between `{left}` and `{right}`: {detail}")]
    Functoriality {
        left: String,
        right: String,
        detail: String,
    },
    #[error("homomorphism `{name}` is not well defined: {detail}")]
    IllDefinedHom { name: String, detail: String },
    #[error("map is incompatible with the relations of its source: {0}")]
    IncompatibleMap(String),
    #[error("colimit could not be determined within {0} cosets")]
    UnknownColim(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("object `{0}` is symbolic and cannot be enumerated")]
    SymbolicObject(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn bound(what: impl Into<String>, bound: usize) -> Self {
        Error::BoundExceeded {
            what: what.into(),
            bound,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
