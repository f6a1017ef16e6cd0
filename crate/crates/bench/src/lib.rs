//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use hallforge_core::{Budget, Catalog, DimVector, PrimeField, Quiver};

/// Catalog of the equioriented type-A quiver on `n` vertices.
pub fn linear_catalog(n: usize, q: u32, bound: &[u32]) -> Arc<Catalog> {
    let field = PrimeField::new(q).expect("prime");
    Arc::new(
        Catalog::build(&field, Arc::new(Quiver::linear(n)), &DimVector(bound.to_vec()), &Budget::default())
            .expect("catalog within budget"),
    )
}
