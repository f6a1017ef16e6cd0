use thiserror::Error;

use crate::budget::BudgetExceeded;
use crate::ff::FfError;
use crate::quiver::{DimVector, QuiverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("operands live over different quivers")]
    QuiverMismatch,
    #[error("operands live over different fields (F_{0} vs F_{1})")]
    FieldMismatch(u32, u32),
    #[error("malformed representation: {0}")]
    Shape(String),
    #[error("dimension vector {dims} exceeds catalog bound {bound}")]
    OutsideCatalogBound { dims: DimVector, bound: DimVector },
    #[error("catalog does not cover a representation of dimension {0}")]
    CatalogIncomplete(DimVector),
    #[error("isomorphism undecidable within budget")]
    Undecidable,
    #[error("unknown class label `{0}`")]
    UnknownLabel(String),
    #[error("Hall number not integral: {0}")]
    Integrality(String),
    #[error("derived computations need an acyclic quiver")]
    CyclicQuiver,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
