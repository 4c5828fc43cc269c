use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polygon edge count {n} is below the minimum of {min}")]
    TooFewEdges { n: usize, min: usize },

    #[error("{what} = {n} exceeds the cutoff {cutoff}")]
    AboveCutoff {
        what: &'static str,
        n: usize,
        cutoff: usize,
    },

    #[error("expected a vector of length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("diagonal vector leaves the confined polytope at coordinate {index}")]
    NotInPolytope { index: usize },

    #[error("{name} = {value} is outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("index {index} is outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("degenerate fan triangle at diagonal {index}")]
    DegenerateTriangle { index: usize },

    #[error("polygon violates the {what} invariant: deviation {deviation:e} exceeds {tol:e}")]
    InvariantViolated {
        what: &'static str,
        deviation: f64,
        tol: f64,
    },

    #[error("least-squares fit needs at least two distinct abscissae")]
    DegenerateFit,

    #[error("residual a - y is not positive at n = {n}")]
    NonPositiveResidual { n: f64 },

    #[error("quadrature did not reach tolerance {tol:e}: last change {last_change:e} at {nodes} nodes per axis")]
    QuadratureNotConverged {
        tol: f64,
        last_change: f64,
        nodes: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
