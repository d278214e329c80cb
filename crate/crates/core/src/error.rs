use thiserror::Error;

use crate::boxgraph::{RefineError, SelectError};
use crate::dynamics::GeneratorError;
use crate::textfmt::FormatError;

/// Errors surfaced by the file-level and driver APIs.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("{0}")]
    Invalid(String),
}
