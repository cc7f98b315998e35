//! Process-level error classification. Exit codes: 0 all checks passed,
//! 1 a residual exceeded its tolerance, 2 usage error (from the argument
//! parser), 3 configuration error, 4 a size cap was exceeded, 5 numeric
//! failure in the underlying computation.

use cpsg_core::algebra::AlgebraError;
use cpsg_core::classical::ClassicalError;
use cpsg_core::correspondence::CorrespondenceError;
use cpsg_core::curve::CurveError;
use cpsg_core::semiclassical::SemiclassicalError;
use cpsg_core::transfer::TransferError;
use cpsg_core::weights::WeightsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("size cap exceeded: {0}")]
    Cap(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 3,
            CliError::Cap(_) => 4,
            CliError::Numeric(_) => 5,
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::DimensionCap { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<TransferError> for CliError {
    fn from(e: TransferError) -> Self {
        match &e {
            TransferError::LatticeTooLarge { .. } | TransferError::BruteForceTooLarge { .. } => {
                CliError::Cap(e.to_string())
            }
            TransferError::Algebra(AlgebraError::DimensionCap { .. }) => {
                CliError::Cap(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<WeightsError> for CliError {
    fn from(e: WeightsError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<SemiclassicalError> for CliError {
    fn from(e: SemiclassicalError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<CorrespondenceError> for CliError {
    fn from(e: CorrespondenceError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<ClassicalError> for CliError {
    fn from(e: ClassicalError) -> Self {
        CliError::Numeric(e.to_string())
    }
}
