//! Exact Ringel–Hall and derived Hall algebras of loop-free quivers over prime fields.
//!
//! Layers, bottom up: [`ff`] (prime-field linear algebra), [`quiver`], [`rep`]
//! (representations, Hom/Ext), [`catalog`] (iso classes up to a bound),
//! [`hall`] (classical product), [`complex`] and [`derived`] (perfect complexes,
//! derived Hom, cones, and the derived product). [`checks`] holds the invariant
//! suites run by `verify` and the acceptance target.

pub mod budget;
pub mod catalog;
pub mod checks;
pub mod complex;
pub mod derived;
pub mod element;
pub mod enumerate;
pub mod error;
pub mod ff;
pub mod hall;
pub mod quiver;
pub mod rep;

pub use budget::Budget;
pub use catalog::{Catalog, CatalogJson, ClassLabel, IsoClass};
pub use checks::CheckResult;
pub use derived::{
    ArrowClass, DerivedHallAlgebra, DerivedHallElement, PerfectObject, PerfectObjectJson,
    PiOrderTable, SlotOrder,
};
pub use element::{ElementJson, LinearCombination, TermJson};
pub use error::{Error, Result};
pub use ff::{Matrix, PrimeField};
pub use hall::{HallAlgebra, HallElement, StructureConstant};
pub use quiver::{DimVector, K0Class, Quiver, QuiverJson};
pub use rep::{RepMorphism, Representation};

/// Version string folded into cache keys.
pub const ENGINE_VERSION: &str = concat!("hallforge-", env!("CARGO_PKG_VERSION"));
