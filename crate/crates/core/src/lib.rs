//! Exact algebra for the relations between leading terms of polynomial
//! automorphisms.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`]: sparse rational polynomials, weighted degrees, leading forms.
//! - [`autmap`]: automorphisms as words in tame generators.
//! - [`derivation`]: derivations, local nilpotence, Jacobian derivations.
//! - [`groebner`]: Buchberger with elimination orders and ring-map kernels.
//! - [`relations`]: the relation ideal of an automorphism and its degree bounds.
//! - [`jvdk`]: constructive tame decomposition in two variables.
//! - [`classify3`]: classification of principal relations in three variables.
//! - [`sample`] and [`suites`]: seeded corpora and the verification suites.

pub mod autmap;
pub mod classify3;
pub mod derivation;
mod error;
pub mod groebner;
pub mod jvdk;
mod linalg;
pub mod poly;
pub mod rational;
pub mod relations;
pub mod sample;
pub mod suites;

pub use error::{Error, Result};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

pub use autmap::{AutWord, Generator, PolyMap};
pub use derivation::{Derivation, NilpotenceVerdict};
pub use groebner::{IdealBasis, MonomialOrder};
pub use poly::{parse_poly, Monomial, Polynomial, WDegree, WeightVector};
pub use relations::RelationReport;
