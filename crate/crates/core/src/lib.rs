//! Homology of group diagrams over finite free categories.
//!
//! The integer linear algebra in [`abelian`] is generic over the scalar
//! type; the aliases below fix it to arbitrary-precision integers, which is
//! what every higher layer uses.

pub mod abelian;
pub mod colimits;
pub mod connectivity;
pub mod cotriple;
pub mod diagramhomology;
pub mod diagrams;
pub mod document;
pub mod error;
pub mod scalar;
pub mod grouphomology;
pub mod permgroups;
pub mod shapes;
pub mod simplicial;
pub mod spaces;
pub mod suite;

pub use error::{Error, Result};

pub type Integer = num_bigint::BigInt;
pub type IntMatrix = abelian::Matrix<Integer>;
pub type FpAbelianGroup = abelian::PresentedGroup<Integer>;
pub type AbHom = abelian::GroupMap<Integer>;
pub type ChainComplex = abelian::Complex<Integer>;
pub type HomologyClass = abelian::Subquotient<Integer>;
