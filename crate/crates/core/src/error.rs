use alloc::boxed::Box;
use alloc::string::String;

use crate::sdp::SdpSolution;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative kernel hit its cap before reaching its accuracy target.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The SDP solver stopped without meeting its targets, or a proof object
    /// extracted from its output failed verification.
    #[error("solver failure: {message}")]
    Solver {
        message: String,
        best: Box<SdpSolution>,
    },
}

impl Error {
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::DimensionMismatch(_) | Error::InvalidInput(_))
    }

    pub fn is_numerical(&self) -> bool {
        !self.is_input_error()
    }
}

macro_rules! input_err {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidInput(alloc::format!($($arg)*))
    };
}

macro_rules! dim_err {
    ($($arg:tt)*) => {
        $crate::error::Error::DimensionMismatch(alloc::format!($($arg)*))
    };
}

pub(crate) use dim_err;
pub(crate) use input_err;
