//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building graphs, decomposing
/// Hamiltonians, propagating walkers or aggregating ensembles.
///
/// Variants fall into two broad groups, distinguished by
/// [`Error::is_precondition_failure`]: malformed input (bad indices, wrong
/// dimensions, unparsable files) and mathematical precondition failures
/// (complex spectra, Jordan blocks, singular metrics, exhausted rejection
/// budgets).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A vertex index lies outside `1..=n` (reported 1-indexed).
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    /// The same ordered pair appears twice in an edge list (1-indexed).
    #[error("duplicate edge {from} -> {to}")]
    DuplicateEdge { from: usize, to: usize },

    /// An edge from a vertex to itself (1-indexed).
    #[error("self-loop on vertex {vertex} is not allowed")]
    SelfLoop { vertex: usize },

    /// Matrix or vector shapes do not conform.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A scalar parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A graph file could not be parsed.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A JSON document could not be decoded.
    #[error("invalid JSON: {0}")]
    Json(String),

    /// The spectrum contains eigenvalues with a non-negligible imaginary part.
    #[error("spectrum is not real (max |Im λ| = {max_imag:.3e})")]
    ComplexSpectrum { max_imag: f64 },

    /// The eigenvector matrix is (numerically) singular: the matrix is not
    /// diagonalizable.
    #[error("matrix is not diagonalizable (reciprocal condition of the eigenbasis {rcond:.3e})")]
    NotDiagonalizable { rcond: f64 },

    /// The eigensolver did not converge.
    #[error("eigenvalue iteration did not converge")]
    EigenSolverFailed,

    /// The metric `V = ΦΦ†` is numerically singular.
    #[error("metric operator is numerically singular (eigenvalue ratio {ratio:.3e})")]
    SingularMetric { ratio: f64 },

    /// `ηHη⁻¹` failed to come out Hermitian.
    #[error("similarity transform is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    /// PageRank power iteration exhausted its iteration budget.
    #[error("PageRank did not converge within {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A rejection sampler exhausted its attempt budget.
    #[error("{family} generator exhausted {attempts} attempts (seed {seed}, graph index {index})")]
    BudgetExhausted {
        family: String,
        seed: u64,
        index: u64,
        attempts: u64,
    },

    /// Processing one graph of an ensemble failed.
    #[error("ensemble graph {index} (master seed {seed}): {cause}")]
    EnsembleGraph {
        seed: u64,
        index: u64,
        cause: Box<Error>,
    },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl Error {
    /// `true` for failures of a mathematical precondition (spectral
    /// classification, metric construction, convergence, rejection budget);
    /// `false` for malformed input.
    pub fn is_precondition_failure(&self) -> bool {
        if let Error::EnsembleGraph { cause, .. } = self {
            return cause.is_precondition_failure();
        }
        matches!(
            self,
            Error::ComplexSpectrum { .. }
                | Error::NotDiagonalizable { .. }
                | Error::EigenSolverFailed
                | Error::SingularMetric { .. }
                | Error::NotHermitian { .. }
                | Error::NoConvergence { .. }
                | Error::BudgetExhausted { .. }
        )
    }
}
