use super::group::{PresentedGroup, Subquotient};
use super::lattice::preimage;
use super::matrix::Matrix;
use super::smith::{smith_with, Track};
use crate::error::{Error, Result};
use crate::scalar::IntScalar;

/// A bounded chain complex `C₀ ← C₁ ← … ← C_top` of presented abelian groups.
///
/// `differential(n)` maps `Cₙ → Cₙ₋₁` on generators; `d₀ = 0`.
#[derive(Clone, Debug)]
pub struct Complex<T: IntScalar> {
    groups: Vec<PresentedGroup<T>>,
    diffs: Vec<Matrix<T>>,
}

impl<T: IntScalar> Complex<T> {
    /// `diffs[k]` is `d_{k+1}: C_{k+1} → C_k`. Verifies shapes, that each
    /// differential respects relations, and that `d ∘ d = 0`.
    pub fn new(groups: Vec<PresentedGroup<T>>, diffs: Vec<Matrix<T>>) -> Result<Self> {
        if groups.is_empty() || diffs.len() + 1 != groups.len() {
            return Err(Error::IncompatibleMap(
                "need one differential between each pair of consecutive degrees".into(),
            ));
        }
        let c = Complex { groups, diffs };
        for n in 1..c.groups.len() {
            let d = &c.diffs[n - 1];
            let (src, dst) = (&c.groups[n], &c.groups[n - 1]);
            if d.num_rows() != dst.num_generators() || d.num_cols() != src.num_generators() {
                return Err(Error::IncompatibleMap(format!("d_{n} has the wrong shape")));
            }
            let rel_images = d.mul(src.relations());
            if !(0..rel_images.num_cols()).all(|j| dst.is_zero_element(&rel_images.column(j))) {
                return Err(Error::IncompatibleMap(format!("d_{n} does not respect relations")));
            }
            if n >= 2 {
                let dd = c.diffs[n - 2].mul(d);
                let below = &c.groups[n - 2];
                if !(0..dd.num_cols()).all(|j| below.is_zero_element(&dd.column(j))) {
                    return Err(Error::IncompatibleMap(format!("d_{} ∘ d_{n} ≠ 0", n - 1)));
                }
            }
        }
        Ok(c)
    }

    /// A complex of free groups of the given ranks.
    pub fn free(ranks: &[usize], diffs: Vec<Matrix<T>>) -> Result<Self> {
        Self::new(ranks.iter().map(|&r| PresentedGroup::free(r)).collect(), diffs)
    }

    pub fn top(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn group(&self, n: usize) -> &PresentedGroup<T> {
        &self.groups[n]
    }

    /// `d_n`, `n ≥ 1`.
    pub fn differential(&self, n: usize) -> &Matrix<T> {
        &self.diffs[n - 1]
    }

    fn is_free(&self) -> bool {
        self.groups.iter().all(|g| g.relations().num_cols() == 0)
    }

    /// `Hₙ` as a subquotient of the generators of `Cₙ`, so that chain maps
    /// can be pushed to homology. Above `top`, the next differential is
    /// taken to be zero.
    pub fn homology_at(&self, n: usize) -> Subquotient<T> {
        let here = &self.groups[n];
        let cycles = if n == 0 {
            Matrix::identity(here.num_generators())
        } else {
            preimage(&self.diffs[n - 1], self.groups[n - 1].relations())
        };
        let mut boundaries = here.relations().clone();
        if n < self.top() {
            boundaries = self.diffs[n].hstack(&boundaries);
        }
        Subquotient::new(&cycles, &boundaries)
    }

    /// Isomorphism type of `Hₙ`. Free complexes use ranks and the torsion
    /// of `d_{n+1}` directly, skipping transforms.
    pub fn homology_group(&self, n: usize) -> PresentedGroup<T> {
        if !self.is_free() {
            return self.homology_at(n).group;
        }
        let rank_in = if n == 0 {
            0
        } else {
            smith_with(&self.diffs[n - 1], Track::NONE).rank()
        };
        let (rank_out, torsion) = if n < self.top() {
            let s = smith_with(&self.diffs[n], Track::NONE);
            (s.rank(), s.torsion())
        } else {
            (0, Vec::new())
        };
        let free = self.groups[n].num_generators() - rank_in - rank_out;
        PresentedGroup::from_invariants(free, &torsion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<i64>;

    #[test]
    fn circle() {
        // ℤ ←0← ℤ : H₀ = ℤ, H₁ = ℤ
        let c = C::free(&[1, 1], vec![Matrix::zeros(1, 1)]).unwrap();
        assert_eq!(c.homology_group(0), PresentedGroup::free(1));
        assert_eq!(c.homology_group(1), PresentedGroup::free(1));
        assert_eq!(c.homology_at(1).group, PresentedGroup::free(1));
    }

    #[test]
    fn doubling_gives_z2() {
        let c = C::free(&[1, 1], vec![Matrix::from_i64_rows(&[vec![2]])]).unwrap();
        assert_eq!(c.homology_group(0), PresentedGroup::cyclic(2));
        assert!(c.homology_group(1).is_trivial());
        assert_eq!(c.homology_at(0).group, PresentedGroup::cyclic(2));
    }

    #[test]
    fn zero_complex() {
        let c = C::free(&[0, 0, 0], vec![Matrix::zeros(0, 0), Matrix::zeros(0, 0)]).unwrap();
        assert!((0..3).all(|n| c.homology_group(n).is_trivial()));
    }

    #[test]
    fn rejects_nonzero_square() {
        let d1 = Matrix::from_i64_rows(&[vec![1]]);
        let d2 = Matrix::from_i64_rows(&[vec![1]]);
        assert!(C::free(&[1, 1, 1], vec![d1, d2]).is_err());
    }

    #[test]
    fn presented_terms() {
        // ℤ/4 ←×2← ℤ/4 : H₀ = ℤ/2, H₁ = ℤ/2
        let z4 = PresentedGroup::cyclic(4);
        let c = C::new(vec![z4.clone(), z4], vec![Matrix::from_i64_rows(&[vec![2]])]).unwrap();
        assert_eq!(c.homology_group(0), PresentedGroup::cyclic(2));
        assert_eq!(c.homology_group(1), PresentedGroup::cyclic(2));
    }
}
