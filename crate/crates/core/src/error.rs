use thiserror::Error;

use crate::diagram::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {requested} exceeds the configured limit {limit}")]
    DimensionLimit { requested: usize, limit: usize },

    #[error("cannot compose: left map takes {left_in:?} but right map produces {right_out:?}")]
    Composition {
        left_in: Vec<usize>,
        right_out: Vec<usize>,
    },

    #[error("state is not normalized: squared norm is {norm_sq}")]
    Normalization { norm_sq: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("operator `{0}` is not unitary")]
    NotUnitary(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("basis is not orthonormal: {0}")]
    NotOrthonormal(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("wire-count mismatch at stage {stage}: previous stage produces {produced} wires but next stage takes {expected}")]
    WireMismatch {
        stage: usize,
        produced: usize,
        expected: usize,
    },

    #[error("unbound box `{0}`")]
    UnboundBox(String),

    #[error("box `{name}` acts on wires of dimension {found}, expected {expected}")]
    BoxDimension {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("negative weight {weight} at index {index}")]
    NegativeWeight { index: usize, weight: f64 },

    #[error("total mass is {0}, expected 1")]
    TotalMass(f64),

    #[error("unknown strategy `{label}` for player {player}")]
    UnknownStrategy { player: usize, label: String },

    #[error("player {0} has an empty strategy set")]
    EmptyStrategySet(usize),

    #[error("embedding of `{0}` is not a basis permutation")]
    NotPermutation(String),

    #[error("enumeration of {requested} cases exceeds the limit {limit}")]
    EnumerationLimit { requested: u128, limit: u128 },

    #[error("domain mismatch: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for errors caused by a size cap rather than malformed input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::DimensionLimit { .. } | Error::EnumerationLimit { .. }
        )
    }
}
