use thiserror::Error;

/// Errors produced by dataset loading and the clustering pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no rows retained after filtering")]
    EmptyDataset,

    #[error("dataset has no class labels")]
    MissingLabels,

    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    #[error("cannot place {k} centers on {n} points")]
    TooManyClusters { k: usize, n: usize },

    #[error("{0}")]
    Domain(String),

    #[error("projection range is degenerate (all values equal)")]
    DegenerateRange,

    #[error("histogram has fewer than 2 nonempty bins")]
    DegenerateHistogram,

    #[error("covariance matrix is zero; no principal direction")]
    DegenerateCovariance,

    #[error("no splittable cluster remains ({leaves} of {requested} leaves reached)")]
    UnsplittableData { leaves: usize, requested: usize },

    #[error("unknown initialization method '{0}'")]
    UnknownMethod(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("manifest error: {0}")]
    Manifest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
