use std::fmt;

use num_traits::{One, Zero};

use super::lattice::{preimage, Lattice};
use super::matrix::Matrix;
use super::smith::{smith_with, Track};
use crate::error::{Error, Result};
use crate::scalar::IntScalar;

/// A finitely presented abelian group `ℤ^g / span(R)`, where the columns of
/// `R` are the relations.
///
/// The Smith form of `R` is computed once at construction; it gives the
/// invariant factors and a change of coordinates to normal form. Equality
/// compares isomorphism classes, not presentations.
#[derive(Clone)]
pub struct PresentedGroup<T: IntScalar> {
    gens: usize,
    relations: Matrix<T>,
    diag: Vec<T>,
    to_normal: Matrix<T>,
    from_normal: Matrix<T>,
}

impl<T: IntScalar> PresentedGroup<T> {
    pub fn new(gens: usize, relations: Matrix<T>) -> Self {
        assert_eq!(relations.num_rows(), gens, "relation matrix must have one row per generator");
        let s = smith_with(&relations, Track::LEFT);
        PresentedGroup {
            gens,
            relations,
            diag: s.diagonal,
            to_normal: s.u.expect("tracked"),
            from_normal: s.u_inv.expect("tracked"),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, Matrix::zeros(rank, 0))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn cyclic(m: T) -> Self {
        Self::new(1, Matrix::from_rows(1, vec![vec![m]]))
    }

    /// `ℤ^free ⊕ ⨁ ℤ/dᵢ`, generators in that order.
    pub fn from_invariants(free: usize, torsion: &[T]) -> Self {
        let g = free + torsion.len();
        let mut rel = Matrix::zeros(g, torsion.len());
        for (k, d) in torsion.iter().enumerate() {
            rel[(free + k, k)] = d.clone();
        }
        Self::new(g, rel)
    }

    pub fn direct_sum(parts: &[PresentedGroup<T>]) -> Self {
        let blocks: Vec<Matrix<T>> = parts.iter().map(|p| p.relations.clone()).collect();
        let gens = parts.iter().map(|p| p.gens).sum();
        Self::new(gens, Matrix::block_diagonal(&blocks))
    }

    pub fn num_generators(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &Matrix<T> {
        &self.relations
    }

    fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn free_rank(&self) -> usize {
        self.gens - self.rank()
    }

    /// Invariant factors greater than one, in divisibility order.
    pub fn torsion(&self) -> Vec<T> {
        self.diag.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.diag.iter().all(One::is_one)
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// Order when finite.
    pub fn order(&self) -> Option<T> {
        self.is_finite()
            .then(|| self.diag.iter().fold(T::one(), |a, d| a * d.clone()))
    }

    /// Coordinates of `x` in normal form: one entry per torsion factor
    /// (reduced into `0..d`) followed by one per free summand.
    pub fn normal_coords(&self, x: &[T]) -> Vec<T> {
        let y = self.to_normal.apply(x);
        let r = self.rank();
        let mut out = Vec::new();
        for (i, d) in self.diag.iter().enumerate() {
            if !d.is_one() {
                out.push(y[i].mod_floor(d));
            }
        }
        out.extend(y[r..].iter().cloned());
        out
    }

    /// Inverse of [`normal_coords`](Self::normal_coords) up to relations.
    pub fn from_normal_coords(&self, c: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.gens];
        let mut k = 0;
        for (i, d) in self.diag.iter().enumerate() {
            if !d.is_one() {
                y[i] = c[k].clone();
                k += 1;
            }
        }
        for i in self.rank()..self.gens {
            y[i] = c[k].clone();
            k += 1;
        }
        self.from_normal.apply(&y)
    }

    /// Whether `x` represents the identity element.
    pub fn is_zero_element(&self, x: &[T]) -> bool {
        self.normal_coords(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, x: &[T], y: &[T]) -> bool {
        let d: Vec<T> = x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect();
        self.is_zero_element(&d)
    }

    /// All elements (as normal coordinates) of a finite group, in
    /// lexicographic order of coordinates.
    pub fn enumerate(&self, bound: usize) -> Result<Vec<Vec<T>>> {
        if !self.is_finite() {
            return Err(Error::Unsupported("enumerating an infinite abelian group".into()));
        }
        let moduli = self.torsion();
        let total = moduli
            .iter()
            .try_fold(1usize, |acc, d| acc.checked_mul(d.to_usize()?))
            .filter(|&n| n <= bound)
            .ok_or_else(|| Error::bound("abelian group enumeration", bound))?;
        let mut out = Vec::with_capacity(total);
        let mut cur = vec![T::zero(); moduli.len()];
        for _ in 0..total {
            out.push(cur.clone());
            for k in (0..moduli.len()).rev() {
                cur[k] = cur[k].clone() + T::one();
                if cur[k] < moduli[k] {
                    break;
                }
                cur[k] = T::zero();
            }
        }
        Ok(out)
    }

    pub fn invariants(&self) -> Invariants<T> {
        Invariants {
            free_rank: self.free_rank(),
            torsion: self.torsion(),
        }
    }
}

impl<T: IntScalar> PartialEq for PresentedGroup<T> {
    fn eq(&self, other: &Self) -> bool {
        self.invariants() == other.invariants()
    }
}

impl<T: IntScalar> Eq for PresentedGroup<T> {}

impl<T: IntScalar> fmt::Display for PresentedGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.invariants().fmt(f)
    }
}

impl<T: IntScalar> fmt::Debug for PresentedGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <{} gens>", self.invariants(), self.gens)
    }
}

/// Isomorphism type of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Invariants<T> {
    pub free_rank: usize,
    pub torsion: Vec<T>,
}

impl<T: IntScalar> fmt::Display for Invariants<T> {
    /// `Z^2 + Z/2 + Z/6`; the trivial group prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A homomorphism of presented groups, given on generators.
#[derive(Clone, Debug)]
pub struct GroupMap<T: IntScalar> {
    source: PresentedGroup<T>,
    target: PresentedGroup<T>,
    matrix: Matrix<T>,
}

impl<T: IntScalar> GroupMap<T> {
    /// Fails if the matrix does not send relations of `source` to
    /// relations of `target`.
    pub fn new(source: PresentedGroup<T>, target: PresentedGroup<T>, matrix: Matrix<T>) -> Result<Self> {
        if matrix.num_rows() != target.gens || matrix.num_cols() != source.gens {
            return Err(Error::IncompatibleMap(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.num_rows(),
                matrix.num_cols(),
                target.gens,
                source.gens
            )));
        }
        let images = matrix.mul(&source.relations);
        if let Some(j) = (0..images.num_cols()).find(|&j| !target.is_zero_element(&images.column(j))) {
            return Err(Error::IncompatibleMap(format!(
                "relation {j} of the source does not map to zero"
            )));
        }
        Ok(GroupMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(g: &PresentedGroup<T>) -> Self {
        GroupMap {
            source: g.clone(),
            target: g.clone(),
            matrix: Matrix::identity(g.gens),
        }
    }

    pub fn zero(source: &PresentedGroup<T>, target: &PresentedGroup<T>) -> Self {
        GroupMap {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.gens, source.gens),
        }
    }

    pub fn source(&self) -> &PresentedGroup<T> {
        &self.source
    }

    pub fn target(&self) -> &PresentedGroup<T> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        self.matrix.apply(x)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupMap<T>) -> GroupMap<T> {
        assert_eq!(self.target.gens, next.source.gens, "composition shape mismatch");
        GroupMap {
            source: self.source.clone(),
            target: next.target.clone(),
            matrix: next.matrix.mul(&self.matrix),
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.num_cols()).all(|j| self.target.is_zero_element(&self.matrix.column(j)))
    }

    /// Equality as homomorphisms (same source and target presentations).
    pub fn same_as(&self, other: &GroupMap<T>) -> bool {
        self.matrix.num_rows() == other.matrix.num_rows()
            && self.matrix.num_cols() == other.matrix.num_cols()
            && (0..self.matrix.num_cols()).all(|j| {
                self.target
                    .elements_equal(&self.matrix.column(j), &other.matrix.column(j))
            })
    }

    pub fn kernel(&self) -> Subquotient<T> {
        let l = preimage(&self.matrix, &self.target.relations);
        Subquotient::new(&l, &self.source.relations)
    }

    pub fn image(&self) -> Subquotient<T> {
        let l = self.matrix.hstack(&self.target.relations);
        Subquotient::new(&l, &self.target.relations)
    }

    pub fn cokernel(&self) -> PresentedGroup<T> {
        PresentedGroup::new(self.target.gens, self.target.relations.hstack(&self.matrix))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// `L / N` for lattices `N ⊆ L ⊆ ℤⁿ`, presented on a basis of `L`.
#[derive(Clone, Debug)]
pub struct Subquotient<T: IntScalar> {
    lattice: Lattice<T>,
    pub group: PresentedGroup<T>,
}

impl<T: IntScalar> Subquotient<T> {
    /// Columns of `numerator` generate `L`; columns of `denominator`
    /// generate `N`, which must lie in `L`.
    pub fn new(numerator: &Matrix<T>, denominator: &Matrix<T>) -> Self {
        let lattice = Lattice::spanned_by(numerator);
        let rel: Vec<Vec<T>> = denominator
            .columns()
            .iter()
            .map(|c| lattice.coords(c).expect("denominator must lie inside numerator"))
            .collect();
        let group = PresentedGroup::new(lattice.rank(), Matrix::from_columns(lattice.rank(), &rel));
        Subquotient { lattice, group }
    }

    /// Basis of `L` (columns), i.e. the ambient representatives of the
    /// group's generators.
    pub fn basis(&self) -> &Matrix<T> {
        self.lattice.basis()
    }

    /// Coordinates of `x ∈ L` in terms of the group's generators.
    pub fn coords(&self, x: &[T]) -> Option<Vec<T>> {
        self.lattice.coords(x)
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.lattice.contains(x)
    }

    /// The map `self → other` induced by an ambient matrix that carries
    /// `L` into the other numerator and `N` into the other denominator.
    pub fn induced(&self, other: &Subquotient<T>, ambient: &Matrix<T>) -> Result<GroupMap<T>> {
        let images = ambient.mul(self.basis());
        let cols = images
            .columns()
            .iter()
            .map(|c| {
                other.coords(c).ok_or_else(|| {
                    Error::IncompatibleMap("ambient map leaves the target subquotient".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GroupMap::new(
            self.group.clone(),
            other.group.clone(),
            Matrix::from_columns(other.group.num_generators(), &cols),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = PresentedGroup<i64>;

    #[test]
    fn invariant_factor_string() {
        let g = G::from_invariants(1, &[2, 6]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/6");
        assert_eq!(G::free(3).to_string(), "Z^3");
        assert_eq!(G::trivial().to_string(), "0");
        assert_eq!(G::from_invariants(0, &[2, 3]), G::cyclic(6));
    }

    #[test]
    fn cokernel_of_doubling() {
        let z = G::free(1);
        let f = GroupMap::new(z.clone(), z, Matrix::from_i64_rows(&[vec![2]])).unwrap();
        assert_eq!(f.cokernel(), G::cyclic(2));
        assert!(f.kernel().group.is_trivial());
    }

    #[test]
    fn kernel_of_zero_map_is_source() {
        let z = G::free(1);
        assert_eq!(GroupMap::zero(&z, &z).kernel().group, z);
    }

    #[test]
    fn kernel_of_identity_minus_zero_on_z2() {
        let z2 = G::cyclic(2);
        let id = GroupMap::identity(&z2);
        assert!(id.kernel().group.is_trivial());
    }

    #[test]
    fn incompatible_matrix_rejected() {
        // ℤ/2 → ℤ/3 sending the generator to 1 is not a homomorphism.
        let r = GroupMap::new(G::cyclic(2), G::cyclic(3), Matrix::from_i64_rows(&[vec![1]]));
        assert!(matches!(r, Err(Error::IncompatibleMap(_))));
    }

    #[test]
    fn image_kernel_orders_multiply() {
        // ℤ/12 → ℤ/12, x ↦ 4x : image ℤ/3, kernel ℤ/4
        let g = G::cyclic(12);
        let f = GroupMap::new(g.clone(), g, Matrix::from_i64_rows(&[vec![4]])).unwrap();
        assert_eq!(f.image().group, G::cyclic(3));
        assert_eq!(f.kernel().group, G::cyclic(4));
    }

    #[test]
    fn enumerate_finite() {
        let g = G::from_invariants(0, &[2, 4]);
        assert_eq!(g.enumerate(100).unwrap().len(), 8);
        assert!(G::free(1).enumerate(100).is_err());
    }

    #[test]
    fn normal_coordinates_round_trip() {
        let g = G::new(2, Matrix::from_i64_rows(&[vec![2, 0], vec![4, 6]]));
        for x in [[1i64, 0], [0, 1], [3, 5]] {
            let c = g.normal_coords(&x);
            let back = g.from_normal_coords(&c);
            assert!(g.elements_equal(&x, &back));
        }
    }
}
