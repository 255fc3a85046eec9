use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("label `{0}` appears more than once")]
    DuplicateLabel(String),

    #[error("dimension mismatch on `{label}`: {left} vs {right}")]
    DimMismatch {
        label: String,
        left: usize,
        right: usize,
    },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("label sets differ: {left:?} vs {right:?}")]
    LabelSetMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },

    #[error("comparison against a zero tensor")]
    ZeroTensor,

    #[error("amplitude count {expected} does not match data length {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("tensor with {0} amplitudes exceeds the dense storage limit")]
    TooLarge(u128),

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid unitary basis: {0}")]
    BasisInvalid(String),

    #[error("contraction plan left unexpected open wires: {0:?}")]
    PlanMismatch(Vec<String>),

    #[error("splice `{out}` -> `{input}` cannot be made: {reason}")]
    SpliceMismatch {
        out: String,
        input: String,
        reason: String,
    },

    #[error("invalid dimension {0}: at least 2 is required")]
    InvalidDimension(usize),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
