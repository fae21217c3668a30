use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid SEM: {0}")]
    InvalidSem(String),

    /// A query received sets that must be pairwise disjoint.
    #[error("argument sets overlap on {0:?}")]
    OverlappingSets(Vec<String>),

    #[error("post-treatment adjustment is not supported; descendants of the treatment in set: {0:?}")]
    PostTreatment(Vec<String>),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("{what} has size {size}, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("singular covariance submatrix")]
    Singular,

    #[error("collinear regression design")]
    Collinear,

    #[error("need more than {needed} rows for this test, have {n}")]
    InsufficientSamples { n: usize, needed: usize },

    #[error("column `{0}` is constant")]
    ConstantColumn(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("treatment `{0}` has no binary generating mechanism")]
    NotBinaryTreatment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
