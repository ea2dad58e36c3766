use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{n_qubits} qubits exceeds the {limit}-qubit limit for {what}")]
    DimensionOverflow {
        n_qubits: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("eigenphase {phase} lies on the logarithm branch cut")]
    BranchCut { phase: f64 },

    #[error("nonpositive time {0}")]
    NonPositiveTime(f64),

    #[error("time step needs a nonzero ground-state energy")]
    ZeroEnergy,

    #[error("spectrum window is degenerate (e_min = e_max = {0})")]
    DegenerateWindow(f64),

    #[error("sampling violates the Nyquist guard: |E| t = {0} >= pi")]
    Nyquist(f64),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:.3e}, f(hi) = {f_hi:.3e}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error(
        "bisection did not converge in {iterations} iterations (best x = {best}, f = {value:.3e})"
    )]
    Convergence {
        iterations: usize,
        best: f64,
        value: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}
