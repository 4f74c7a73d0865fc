use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("level l must be an odd integer >= 3, got {0}")]
    InvalidLevel(i64),

    #[error("root-of-unity parameter m={m} is not coprime to l={l}")]
    NotCoprime { l: usize, m: i64 },

    #[error("parity mismatch: N={n} and k={k} must have the same parity")]
    ParityMismatch { n: usize, k: usize },

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("quadrature grid too small: need more than {required} nodes, got {actual}")]
    GridTooSmall { required: usize, actual: usize },

    #[error("row {node} of the transition kernel sums to {sum}, not 1")]
    NonStochasticRow { node: usize, sum: f64 },

    #[error(
        "power iteration did not converge after {iterations} iterations (last change {change:e})"
    )]
    NonConvergence { iterations: usize, change: f64 },

    #[error("stationary distributions are only defined for finite-state models")]
    InfiniteStateSpace,

    #[error("iteration would leave the truncated state space (cutoff {cutoff}, needs {needed})")]
    CutoffExceeded { cutoff: usize, needed: usize },

    #[error("state {0} is outside the kernel domain")]
    OutsideDomain(usize),

    #[error("asymptotic formula is singular at xi = {0}")]
    Singular(f64),

    #[error("{0}")]
    InvalidArgument(String),
}
