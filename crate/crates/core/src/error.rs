use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series division needs a nonzero constant term in the divisor")]
    DivisionByNonUnit,
    #[error("series composition needs an inner series with zero constant term")]
    CompositionNonZeroConstant,
    #[error("exp needs a series with zero constant term")]
    ExpNonZeroConstant,
    #[error("log needs a series with constant term 1")]
    LogNonUnitConstant,
    #[error("coefficient of x^{requested} requested beyond truncation order {order}")]
    BeyondTruncation { requested: i64, order: i64 },
    #[error("vector is not weight-homogeneous")]
    MixedWeight,
    #[error("zero vector has no weight")]
    ZeroVector,
    #[error("operator has no column for basis vector of weight {0} (domain bound exceeded)")]
    OutsideDomain(i64),
    #[error("window too small to certify any block")]
    WindowTooSmall,
    #[error("coefficient cell {0} lies outside the certified region")]
    Uncertified(String),
    #[error("incompatible series: {0}")]
    Incompatible(String),
    #[error("fit failed: {0}")]
    FitFailed(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
