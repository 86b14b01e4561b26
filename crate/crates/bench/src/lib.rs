//! Shared inputs for the kernel benchmarks.

use liewb_core::catalog::{Catalog, Payload};
use liewb_core::lie::RealizedAlgebraFile;
use liewb_core::LieAlgebra;

pub fn catalog() -> Catalog {
    Catalog::builtin().expect("built-in fixtures")
}

/// The realized fixture `name`, unparsed into an algebra.
pub fn realized(cat: &Catalog, name: &str) -> RealizedAlgebraFile {
    match cat.load(name).expect("fixture").payload {
        Payload::RealizedAlgebra(f) => f,
        _ => panic!("`{name}` is not a realized algebra"),
    }
}

/// An abstract copy of a fixture algebra, without its realization.
pub fn algebra(cat: &Catalog, name: &str) -> LieAlgebra {
    cat.algebra(name).expect("algebra").without_realization()
}
