use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("lottery has no outcomes")]
    EmptyLottery,
    #[error("{outcomes} outcomes but {probs} probabilities")]
    LengthMismatch { outcomes: usize, probs: usize },
    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    ProbabilitySumMismatch { sum: f64 },
    #[error("joint matrix sums to {sum}, expected 1")]
    TotalMassMismatch { sum: f64 },
    #[error("non-finite value {value} in {what}")]
    NonFinite { what: &'static str, value: f64 },
    #[error("joint matrix is {rows}x{cols}, grids are {grid_x}x{grid_y}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        grid_x: usize,
        grid_y: usize,
    },
    #[error("matrix shapes {left:?} and {right:?} differ")]
    MatrixShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{which} marginal does not match its lottery (deviation {deviation})")]
    MarginalMismatch { which: &'static str, deviation: f64 },
    #[error("utility undefined at x = {x}: {reason}")]
    DomainError { x: f64, reason: &'static str },
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("overflow evaluating {what} (log-magnitude {exponent})")]
    Overflow { what: &'static str, exponent: f64 },
    #[error("ordering violated: {0}")]
    OrderingViolation(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("joint grids differ, a square coupling on a common grid is required")]
    NonSquareGrid,
    #[error("theta invariant violated at ({row}, {col}): {reason}")]
    InvariantViolation {
        row: usize,
        col: usize,
        reason: &'static str,
    },
    #[error("bracket [{lo}, {hi}] does not change sign")]
    BracketError { lo: f64, hi: f64 },
    #[error("acts are defined over {left} and {right} states")]
    StateMismatch { left: usize, right: usize },
    #[error("invalid spec string {0:?}")]
    InvalidSpec(String),
    #[error("no admissible sample after {attempts} attempts")]
    GenerationExhausted { attempts: u32 },
}

pub(crate) fn check_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
