use thiserror::Error;

/// Errors surfaced by problem loading, the linear-algebra kernel, the
/// relaxation solver, and the sampling oracle.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data. The message carries the path to
    /// the offending field where one exists.
    #[error("input error: {0}")]
    Input(String),

    /// An iterative kernel hit its iteration cap before reaching tolerance.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// The Gram system of an affine constraint set is singular beyond what
    /// diagonal regularization can absorb.
    #[error("rank-deficient constraint set: constraints {indices:?} are linearly dependent")]
    RankDeficient { indices: Vec<usize> },

    /// The corner entry of a lifted matrix is too far from 1 to read a
    /// solution out of it.
    #[error("extraction error: corner entry {corner} is not within {tol} of 1")]
    Extraction { corner: f64, tol: f64 },

    /// The equality system Ax = b has no solution.
    #[error("infeasible system: {0}")]
    Infeasible(String),

    /// The feasible region contains no sample points.
    #[error("empty feasible region: {0}")]
    EmptyRegion(String),

    /// A requested enumeration would exceed the hard size cap.
    #[error("size error: {0}")]
    Size(String),
}

pub type Result<T> = std::result::Result<T, Error>;
