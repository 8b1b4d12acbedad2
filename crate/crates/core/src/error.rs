use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomials belong to different charts")]
    ChartMismatch,

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("odd generator `{name}` raised to power {power} at byte {pos} (odd generators square to zero)")]
    OddPower { name: String, power: u32, pos: usize },

    #[error("odd generator `{name}` repeated in a product at byte {pos} (odd generators square to zero)")]
    OddSquare { name: String, pos: usize },

    #[error("expression is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("chart is not an affine Darboux chart")]
    NotDarboux,

    #[error("potential is not in Darboux normal form: {0}")]
    NotNormalForm(String),

    #[error("chart has no cotangent (position/momentum) structure")]
    NotCotangent,

    #[error("graph does not match the chart sectors: {0}")]
    GraphMismatch(String),

    #[error("graph is not tangent to the Hamiltonian vector field (residual `{0}`)")]
    NotTangent(String),

    #[error("element is not in the naive complex: {0}")]
    NotNaive(String),

    #[error("base is not a point: {0}")]
    NonPointBase(String),

    #[error("lift order must be at least 2, got {0}")]
    LiftOrder(usize),

    #[error("unknown gallery instance `{0}`")]
    UnknownInstance(String),

    #[error("instance file: {0}")]
    InstanceFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
