use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a mathematical precondition (non-unit axis, non-unitary matrix, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The mass term lies outside `0 <= m c^2 dt < pi/2`.
    #[error("m c^2 dt = {0} is outside the gap-theorem hypothesis [0, pi/2)")]
    OutOfHypothesis(f64),

    #[error("no rotation angle satisfies the gap inequality with margin {margin} at m c^2 dt = {mass_phase}")]
    Infeasible { mass_phase: f64, margin: f64 },

    /// Spinors are undefined (e.g. `m = 0` and `p = 0`).
    #[error("degenerate spinor request: {0}")]
    Degenerate(String),

    #[error("occupancy error: {0}")]
    Occupancy(String),

    #[error("size limit exceeded: {what} = {value} (max {max})")]
    SizeLimit {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    IndexOutOfRange { index: usize, n_qubits: usize },
}
