use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("site {site} out of range for n = {n}")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("invalid observable: {0}")]
    InvalidObservable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("no convergence after {iterations} iterations (best residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error("lasso did not converge after {iterations} sweeps (duality gap {duality_gap:.3e})")]
    LassoConvergence { iterations: usize, duality_gap: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate bound: {0}")]
    DegenerateBound(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("sweep error: {0}")]
    Sweep(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Short machine-readable tag used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidLattice(_) => "invalid_lattice",
            Error::SiteOutOfRange { .. } => "index",
            Error::Dimension { .. } => "dimension",
            Error::InvalidExponent(_) => "invalid_exponent",
            Error::InvalidObservable(_) => "invalid_observable",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::ResourceLimit(_) => "resource_limit",
            Error::Convergence { .. } => "convergence",
            Error::LassoConvergence { .. } => "lasso_convergence",
            Error::Domain(_) => "domain",
            Error::DegenerateBound(_) => "degenerate_bound",
            Error::Fit(_) => "fit",
            Error::Config(_) => "config",
            Error::Sweep(_) => "sweep",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
