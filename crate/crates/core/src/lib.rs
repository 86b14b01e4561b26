//! Exact computations with Lie algebras of polynomial vector fields.
//!
//! The kernel is layered bottom-up: exact polynomials ([`poly`]), Weyl-algebra
//! operators ([`weyl`]), structure constants ([`lie`]), the enveloping algebra
//! ([`enveloping`]), the Lie-Poisson side ([`poisson`]), central extensions
//! ([`extensions`]) and the fixture catalog ([`catalog`]).

pub mod catalog;
pub mod enveloping;
pub mod error;
pub mod expr;
pub mod extensions;
pub mod lie;
pub mod linalg;
pub mod poisson;
pub mod poly;
pub mod scalar;
pub mod weyl;

pub use enveloping::{Enveloping, NcPoly, PbwMonomial};
pub use error::{Error, Result};

pub use lie::{Element, LieAlgebra};
pub use poly::{Monomial, Polynomial, VarSet};
pub use scalar::{Laurent, Rational, Scalar};
pub use weyl::{DiffOp, VectorField};
