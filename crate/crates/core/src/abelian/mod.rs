//! Exact integer linear algebra: matrices, Smith normal form, finitely
//! presented abelian groups, their homomorphisms, and chain complexes.

mod complex;
mod group;
mod lattice;
mod matrix;
mod smith;

pub use complex::Complex;
pub use group::{GroupMap, Invariants, PresentedGroup, Subquotient};
pub use lattice::{kernel, kernel_with_left_inverse, preimage, solve, solve_with, span_basis, Lattice};
pub use matrix::Matrix;
pub use smith::{rank, smith_normal_form, smith_with, Smith, Track};
