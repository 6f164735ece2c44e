use thiserror::Error;

/// Errors raised anywhere in the evaluation pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("geometric sum of length {0} is not allowed (length must be at least 1)")]
    EmptyGeometricSum(i64),
    #[error("element is not of finite order {order}: {reason}")]
    NotFiniteOrder { order: u64, reason: String },
    #[error("no Euler characteristic assigned to class symbol `{0}`")]
    MissingChi(String),
    #[error("class symbol `{0}` carries no constructible function")]
    MissingBacking(String),
    #[error("constructible functions live on different spaces: `{0}` vs `{1}`")]
    SpaceMismatch(String, String),
    #[error("invalid stratified space: {0}")]
    InvalidSpace(String),
    #[error("invalid stratified map: {0}")]
    InvalidMap(String),
    #[error("discrepancy of component `{component}` equals -1")]
    DegenerateDiscrepancy { component: String },
    #[error("component `{component}` has discrepancy {a} <= -1 (pair is not log-terminal)")]
    NotLogTerminal { component: String, a: String },
    #[error("invalid SNC datum: {0}")]
    InvalidSnc(String),
    #[error("discrepancy lists differ: {0}")]
    DiscrepancyMismatch(String),
    #[error("group closure exceeded {cap} elements")]
    CapExceeded { cap: usize },
    #[error("subgroup enumeration refused: |G| = {order} exceeds bound {bound}")]
    SubgroupEnumerationCap { order: usize, bound: usize },
    #[error("action is not in SL: element {element} has determinant != 1")]
    SlGateFailed { element: usize },
    #[error("non-integral age {age} for element {element} under the SL gate")]
    NonIntegralAge { element: usize, age: String },
    #[error("cannot align stratum labels: {0}")]
    StratumLabelMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Variant name, used as a stable error tag in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::SingularMatrix => "SingularMatrix",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::EmptyGeometricSum(_) => "EmptyGeometricSum",
            Error::NotFiniteOrder { .. } => "NotFiniteOrder",
            Error::MissingChi(_) => "MissingChi",
            Error::MissingBacking(_) => "MissingBacking",
            Error::SpaceMismatch(..) => "SpaceMismatch",
            Error::InvalidSpace(_) => "InvalidSpace",
            Error::InvalidMap(_) => "InvalidMap",
            Error::DegenerateDiscrepancy { .. } => "DegenerateDiscrepancy",
            Error::NotLogTerminal { .. } => "NotLogTerminal",
            Error::InvalidSnc(_) => "InvalidSnc",
            Error::DiscrepancyMismatch(_) => "DiscrepancyMismatch",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::SubgroupEnumerationCap { .. } => "SubgroupEnumerationCap",
            Error::SlGateFailed { .. } => "SlGateFailed",
            Error::NonIntegralAge { .. } => "NonIntegralAge",
            Error::StratumLabelMismatch(_) => "StratumLabelMismatch",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
