//! Sublattices of ℤⁿ: kernels, spans, integer linear systems.

use super::matrix::Matrix;
use super::smith::{smith_with, Smith, Track};
use crate::scalar::IntScalar;

/// Basis of the integer kernel of `a`, as columns of an `n × (n − rank)` matrix.
pub fn kernel<T: IntScalar>(a: &Matrix<T>) -> Matrix<T> {
    kernel_with_left_inverse(a).0
}

/// Kernel basis `K` together with `P` such that `P·K = I`.
///
/// For any `x` in the kernel, `P·x` are its coordinates in `K`.
pub fn kernel_with_left_inverse<T: IntScalar>(a: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let n = a.num_cols();
    let s = smith_with(a, Track::RIGHT);
    let r = s.rank();
    let v = s.v.expect("right transform tracked");
    let v_inv = s.v_inv.expect("right transform tracked");
    (v.select_columns(r..n), v_inv.select_rows(r..n))
}

/// Solves `a·x = b` over ℤ, or returns `None` if no integer solution exists.
pub fn solve<T: IntScalar>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    let s = smith_with(a, Track::BOTH);
    solve_with(&s, b)
}

/// Solves against a precomputed Smith form (both transforms tracked).
pub fn solve_with<T: IntScalar>(s: &Smith<T>, b: &[T]) -> Option<Vec<T>> {
    let u = s.u.as_ref().expect("left transform tracked");
    let v = s.v.as_ref().expect("right transform tracked");
    let ub = u.apply(b);
    let r = s.rank();
    if ub[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![T::zero(); s.cols];
    for i in 0..r {
        let (q, rem) = num_integer::Integer::div_rem(&ub[i], &s.diagonal[i]);
        if !rem.is_zero() {
            return None;
        }
        y[i] = q;
    }
    Some(v.apply(&y))
}

/// A basis of the column span of `g` (a saturated description is not implied).
pub fn span_basis<T: IntScalar>(g: &Matrix<T>) -> Matrix<T> {
    let s = smith_with(g, Track::LEFT);
    let u_inv = s.u_inv.as_ref().expect("left transform tracked");
    let cols: Vec<Vec<T>> = s
        .diagonal
        .iter()
        .enumerate()
        .map(|(i, d)| u_inv.column(i).into_iter().map(|x| x * d.clone()).collect())
        .collect();
    Matrix::from_columns(g.num_rows(), &cols)
}

/// A lattice given by a basis, ready to answer membership and coordinate queries.
#[derive(Clone, Debug)]
pub struct Lattice<T: IntScalar> {
    basis: Matrix<T>,
    smith: Smith<T>,
}

impl<T: IntScalar> Lattice<T> {
    /// Lattice spanned by the columns of `generators` (any generating set).
    pub fn spanned_by(generators: &Matrix<T>) -> Self {
        Self::from_basis(span_basis(generators))
    }

    /// `basis` must have linearly independent columns.
    pub fn from_basis(basis: Matrix<T>) -> Self {
        let smith = smith_with(&basis, Track::BOTH);
        debug_assert_eq!(smith.rank(), basis.num_cols(), "basis is not independent");
        Lattice { basis, smith }
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.num_cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.num_rows()
    }

    /// Coordinates of `x` in the basis, if `x` lies in the lattice.
    pub fn coords(&self, x: &[T]) -> Option<Vec<T>> {
        solve_with(&self.smith, x)
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.coords(x).is_some()
    }

    pub fn contains_all(&self, m: &Matrix<T>) -> bool {
        m.columns().iter().all(|c| self.contains(c))
    }
}

/// `{ x : a·x ∈ span(r) }`, returned as a generating set (columns).
pub fn preimage<T: IntScalar>(a: &Matrix<T>, r: &Matrix<T>) -> Matrix<T> {
    let n = a.num_cols();
    let k = kernel(&a.hstack(&r.neg()));
    k.select_rows(0..n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_row() {
        let a = Matrix::<i64>::from_i64_rows(&[vec![2, 4, 6]]);
        let (k, p) = kernel_with_left_inverse(&a);
        assert_eq!(k.num_cols(), 2);
        assert!(a.mul(&k).is_zero());
        assert_eq!(p.mul(&k), Matrix::identity(2));
    }

    #[test]
    fn solve_detects_divisibility() {
        let a = Matrix::<i64>::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(solve(&a, &[4, 9]), Some(vec![2, 3]));
        assert_eq!(solve(&a, &[1, 0]), None);
    }

    #[test]
    fn span_basis_of_redundant_generators() {
        let g = Matrix::<i64>::from_i64_rows(&[vec![2, 4, 0], vec![0, 0, 3]]);
        let l = Lattice::spanned_by(&g);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&[2, 3]));
        assert!(!l.contains(&[1, 0]));
        assert!(l.contains_all(&g));
    }

    #[test]
    fn preimage_of_even_lattice() {
        // x with 3x ∈ 2ℤ  ⇒  x ∈ 2ℤ
        let a = Matrix::<i64>::from_i64_rows(&[vec![3]]);
        let r = Matrix::<i64>::from_i64_rows(&[vec![2]]);
        let l = Lattice::spanned_by(&preimage(&a, &r));
        assert!(l.contains(&[2]));
        assert!(!l.contains(&[1]));
    }
}
