use thiserror::Error;

/// Engine-wide error type. Variants carry the module-qualified codes the CLI
/// prints, so errors can cross module boundaries without re-wrapping.
#[derive(Debug, Error)]
pub enum Error {
    #[error("exactlin: composite of differentials is nonzero at ({row}, {col})")]
    CompositeNotZero { row: usize, col: usize },

    #[error("dgalg: value for generator `{generator}` has wrong (hdeg, weight): expected ({expected_hdeg}, {expected_weight})")]
    DegreeMismatch {
        generator: String,
        expected_hdeg: i64,
        expected_weight: i64,
    },

    #[error("koszul: element {index} of the sequence is not homogeneous")]
    InhomogeneousElement { index: usize },

    #[error("dgalg: module generator values are not linear over the base (offending generator `{generator}`)")]
    NotFree { generator: String },

    #[error("resolvent: bounds too small: {0}")]
    BoundTooSmall(String),

    #[error("cech: inconsistent intersection table: {{{superset}}} intersects but subset {{{subset}}} does not")]
    InconsistentTable { superset: String, subset: String },

    #[error("cech: missing transition data for overlap {0}")]
    MissingTransition(String),

    #[error("cech: {0}")]
    Cech(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("parse: relation `{relation}` is not weight-homogeneous (weights {weights:?})")]
    InhomogeneousRelation { relation: String, weights: Vec<i64> },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code: 1 input error, 2 verification mismatch, 3 bound exhaustion.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BoundTooSmall(_) => 3,
            Error::CompositeNotZero { .. } => 2,
            _ => 1,
        }
    }
}
