use thiserror::Error;

use crate::decompose::Decomposition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("geometric degeneracy: {0}")]
    Geometry(String),

    /// Some part of the weight set is not covered by any labeled region even
    /// after the last grid refinement. The partial result is attached.
    #[error("incomplete decomposition: regions cover {covered_fraction:.6} of the weight set")]
    Incomplete {
        covered_fraction: f64,
        partial: Box<Decomposition>,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
