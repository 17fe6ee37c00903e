use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{context}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("strip matrices have different orientations")]
    OrientationMismatch,

    #[error("order {name} = {value} outside the admissible range {range}")]
    InvalidOrder {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least {needed} coefficients, got {available}")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("invalid eliminator: {0}")]
    InvalidEliminator(String),

    #[error("matrix is singular: no usable pivot in column {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("system couples layer {layer} to the later layer {later}; time marching needs a causal system")]
    NonCausal { layer: usize, later: usize },

    #[error("incompatible initial/boundary data: {0}")]
    IncompatibleData(String),

    #[error("nonzero boundary values are only supported for beta = 2 (got beta = {beta})")]
    UnsupportedBoundary { beta: f64 },

    #[error("problem must have zero initial and boundary data before assembly")]
    NotHomogeneous,

    #[error("x = {x} is outside the open interval (0, 1)")]
    OutOfDomain { x: f64 },
}
