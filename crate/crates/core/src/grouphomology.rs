//! Integral homology of finite groups from the normalized bar complex,
//! plus closed forms for groups known only by their isomorphism type.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abelian::{Complex, Matrix};
use crate::error::{Error, Result};
use crate::permgroups::{GroupHom, PermGroup};
use crate::{AbHom, ChainComplex, FpAbelianGroup, HomologyClass};

pub const DEFAULT_BASIS_BOUND: usize = 100_000;

/// `C_n` free on `n`-tuples of non-identity elements, with
/// `d[g₁|…|gₙ] = [g₂|…|gₙ] + Σ (−1)ⁱ […|gᵢgᵢ₊₁|…] + (−1)ⁿ [g₁|…|gₙ₋₁]`,
/// terms containing the identity dropped.
///
/// Elements are indexed in the group's sorted order, where the identity is 0.
#[derive(Clone, Debug)]
pub struct BarComplex {
    group: PermGroup,
    complex: ChainComplex,
}

impl BarComplex {
    pub fn new(group: &PermGroup, top: usize) -> Result<Self> {
        Self::with_bound(group, top, DEFAULT_BASIS_BOUND)
    }

    pub fn with_bound(group: &PermGroup, top: usize, bound: usize) -> Result<Self> {
        let order = group.order()?;
        let m = order - 1;
        let top_rank = (m as u128).checked_pow(top as u32).unwrap_or(u128::MAX);
        if top_rank > bound as u128 {
            return Err(Error::bound(format!("bar complex basis in degree {top}"), bound));
        }
        let table = multiplication_table(group)?;
        let ranks: Vec<usize> = (0..=top).map(|n| m.pow(n as u32)).collect();
        let diffs = (1..=top).map(|n| bar_differential(&table, order, n)).collect();
        let complex = Complex::free(&ranks, diffs)?;
        Ok(BarComplex {
            group: group.clone(),
            complex,
        })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn top(&self) -> usize {
        self.complex.top()
    }

    pub fn rank(&self, n: usize) -> usize {
        self.complex.group(n).num_generators()
    }
}

/// `table[a·order + b]` is the index of `a·b` (composition `a ∘ b`).
pub(crate) fn multiplication_table(group: &PermGroup) -> Result<Vec<usize>> {
    let e = group.elements()?;
    let n = e.len();
    let mut table = Vec::with_capacity(n * n);
    for a in e.list() {
        for b in e.list() {
            table.push(e.index_of(&a.compose(b)).expect("closed"));
        }
    }
    Ok(table)
}

/// Index of a tuple of non-identity element indices in the degree-`n` basis.
pub(crate) fn tuple_index(tuple: &[usize], order: usize) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * (order - 1) + (g - 1))
}

pub(crate) fn tuple_at(mut index: usize, n: usize, order: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for k in (0..n).rev() {
        t[k] = index % (order - 1) + 1;
        index /= order - 1;
    }
    t
}

fn bar_differential(table: &[usize], order: usize, n: usize) -> Matrix<BigInt> {
    let m = order - 1;
    let rows = m.pow(n as u32 - 1);
    let cols = m.pow(n as u32);
    let mut d = Matrix::zeros(rows, cols);
    for c in 0..cols {
        let t = tuple_at(c, n, order);
        for i in 0..=n {
            let face: Vec<usize> = if i == 0 {
                t[1..].to_vec()
            } else if i == n {
                t[..n - 1].to_vec()
            } else {
                let mut f = t[..i - 1].to_vec();
                f.push(table[t[i - 1] * order + t[i]]);
                f.extend(&t[i + 1..]);
                f
            };
            if face.contains(&0) {
                continue;
            }
            let r = tuple_index(&face, order);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            d[(r, c)] += sign;
        }
    }
    d
}

/// `H_n(G; ℤ)`.
pub fn group_homology(g: &PermGroup, n: usize) -> Result<FpAbelianGroup> {
    Ok(BarComplex::new(g, n + 1)?.complex.homology_group(n))
}

/// `H_n(G)` as a subquotient of bar chains, for pushing maps forward.
pub fn group_homology_classes(g: &PermGroup, n: usize) -> Result<HomologyClass> {
    Ok(BarComplex::new(g, n + 1)?.complex.homology_at(n))
}

/// The chain map `[g₁|…|gₙ] ↦ [f(g₁)|…|f(gₙ)]` in degree `n`.
pub fn bar_chain_map(f: &GroupHom, n: usize) -> Result<Matrix<BigInt>> {
    let (so, to) = (f.source().order()?, f.target().order()?);
    let rows = (to - 1).pow(n as u32);
    let cols = (so - 1).pow(n as u32);
    let mut m = Matrix::zeros(rows, cols);
    for c in 0..cols {
        let t: Vec<usize> = tuple_at(c, n, so).into_iter().map(|g| f.apply_index(g)).collect();
        if !t.contains(&0) {
            m[(tuple_index(&t, to), c)] += 1;
        }
    }
    Ok(m)
}

/// `H_n(f) : H_n(G) → H_n(H)`.
pub fn induced_map(f: &GroupHom, n: usize) -> Result<AbHom> {
    let src = group_homology_classes(f.source(), n)?;
    let dst = group_homology_classes(f.target(), n)?;
    src.induced(&dst, &bar_chain_map(f, n)?)
}

/// Groups known only up to isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolicGroup {
    Trivial,
    Cyclic(u64),
    InfiniteCyclic,
    Free(usize),
}

/// `H_n` from the standard closed forms.
pub fn closed_form_homology(kind: SymbolicGroup, n: usize) -> Result<FpAbelianGroup> {
    if n == 0 {
        return Ok(FpAbelianGroup::free(1));
    }
    Ok(match kind {
        SymbolicGroup::Trivial => FpAbelianGroup::trivial(),
        SymbolicGroup::Cyclic(0) => {
            return Err(Error::Input("cyclic group of order 0; use infinite_cyclic".into()))
        }
        SymbolicGroup::Cyclic(m) if n % 2 == 1 => FpAbelianGroup::cyclic(BigInt::from(m)),
        SymbolicGroup::Cyclic(_) => FpAbelianGroup::trivial(),
        SymbolicGroup::InfiniteCyclic if n == 1 => FpAbelianGroup::free(1),
        SymbolicGroup::Free(r) if n == 1 => FpAbelianGroup::free(r),
        SymbolicGroup::InfiniteCyclic | SymbolicGroup::Free(_) => FpAbelianGroup::trivial(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroups::{abelianization, Perm};

    fn z2_in_s3() -> PermGroup {
        PermGroup::new(3, vec![Perm::from_images(vec![1, 0, 2]).unwrap()]).unwrap()
    }

    #[test]
    fn ranks_and_square_zero() {
        let b = BarComplex::new(&PermGroup::symmetric(3), 3).unwrap();
        assert_eq!(b.rank(3), 125);
        assert_eq!(b.rank(0), 1);
    }

    #[test]
    fn tuple_indexing_round_trips() {
        for i in 0..125 {
            assert_eq!(tuple_index(&tuple_at(i, 3, 6), 6), i);
        }
    }

    #[test]
    fn s3_table() {
        let s3 = PermGroup::symmetric(3);
        let h: Vec<String> = (0..=3).map(|n| group_homology(&s3, n).unwrap().to_string()).collect();
        assert_eq!(h, ["Z", "Z/2", "0", "Z/6"]);
    }

    #[test]
    fn z2_table() {
        let z2 = PermGroup::cyclic(2);
        assert!(group_homology(&z2, 2).unwrap().is_trivial());
        assert_eq!(group_homology(&z2, 3).unwrap().to_string(), "Z/2");
    }

    #[test]
    fn h1_is_abelianization() {
        for g in [PermGroup::symmetric(3), PermGroup::alternating(3), PermGroup::cyclic(4)] {
            assert_eq!(group_homology(&g, 1).unwrap(), abelianization(&g).unwrap().group);
        }
    }

    #[test]
    fn h3_of_inclusion_is_injective() {
        let f = GroupHom::inclusion(&z2_in_s3(), &PermGroup::symmetric(3)).unwrap();
        let h = induced_map(&f, 3).unwrap();
        assert_eq!(h.source().to_string(), "Z/2");
        assert_eq!(h.target().to_string(), "Z/6");
        assert!(h.is_injective());
    }

    #[test]
    fn h3_of_trivial_hom_is_zero() {
        let f = GroupHom::trivial(&PermGroup::cyclic(2), &PermGroup::symmetric(3));
        assert!(induced_map(&f, 3).unwrap().is_zero());
    }

    #[test]
    fn identity_induces_identity() {
        let s3 = PermGroup::symmetric(3);
        let h = induced_map(&GroupHom::identity(&s3), 3).unwrap();
        assert!(h.same_as(&AbHom::identity(h.source())));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_homology(SymbolicGroup::Cyclic(2), 3).unwrap().to_string(), "Z/2");
        assert!(closed_form_homology(SymbolicGroup::Free(1), 2).unwrap().is_trivial());
        assert!(closed_form_homology(SymbolicGroup::Cyclic(6), 2).unwrap().is_trivial());
        assert_eq!(closed_form_homology(SymbolicGroup::Free(3), 1).unwrap().to_string(), "Z^3");
    }

    #[test]
    fn bound_fails_loudly() {
        assert!(matches!(
            BarComplex::with_bound(&PermGroup::symmetric(3), 4, 100),
            Err(Error::BoundExceeded { .. })
        ));
    }
}
