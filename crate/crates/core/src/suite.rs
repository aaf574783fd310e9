//! Seeded random diagrams for cross-checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::Matrix;
use crate::diagramhomology::ShortExactSequence;
use crate::diagrams::{AbelianDiagram, ArrowMap, GroupDiagram, GroupObject};
use crate::error::Result;
use crate::permgroups::{GroupHom, Perm, PermGroup};
use crate::shapes::{Arrow, FreeCategory, Graph};
use crate::{AbHom, FpAbelianGroup};

pub const DEFAULT_SEED: u64 = 20_260_101;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An acyclic graph on `2..=max_vertices` vertices with `1..=max_arrows`
/// arrows, each from a lower to a higher vertex.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize) -> Graph {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let m = rng.gen_range(1..=max_arrows.max(1));
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let arrows = (0..m)
        .map(|k| {
            let s = rng.gen_range(0..n - 1);
            let t = rng.gen_range(s + 1..n);
            Arrow { name: format!("e{k}"), src: vertices[s].clone(), dst: vertices[t].clone() }
        })
        .collect();
    Graph::new(vertices, arrows).expect("acyclic by construction")
}

/// `0, ℤ, ℤ/2, ℤ/3, ℤ/4, ℤ ⊕ ℤ/2`.
pub fn abelian_pool() -> Vec<FpAbelianGroup> {
    vec![
        FpAbelianGroup::trivial(),
        FpAbelianGroup::free(1),
        FpAbelianGroup::cyclic(2.into()),
        FpAbelianGroup::cyclic(3.into()),
        FpAbelianGroup::cyclic(4.into()),
        FpAbelianGroup::from_invariants(1, &[2.into()]),
    ]
}

/// A random homomorphism; falls back to zero when no attempt respects relations.
pub fn random_ab_hom(rng: &mut impl Rng, s: &FpAbelianGroup, t: &FpAbelianGroup) -> AbHom {
    for _ in 0..20 {
        let rows: Vec<Vec<i64>> =
            (0..t.num_generators()).map(|_| (0..s.num_generators()).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let m = Matrix::from_i64_rows(&rows);
        let m = if rows.is_empty() { Matrix::zeros(0, s.num_generators()) } else { m };
        if let Ok(f) = AbHom::new(s.clone(), t.clone(), m) {
            return f;
        }
    }
    AbHom::zero(s, t)
}

pub fn random_abelian_diagram_on(rng: &mut impl Rng, cat: &FreeCategory) -> AbelianDiagram {
    let pool = abelian_pool();
    let objects: Vec<FpAbelianGroup> = (0..cat.num_objects()).map(|_| pool.choose(rng).expect("pool").clone()).collect();
    let g = cat.graph();
    let arrows = (0..g.arrows.len()).map(|a| random_ab_hom(rng, &objects[g.src(a)], &objects[g.dst(a)])).collect();
    AbelianDiagram::new(cat.clone(), objects, arrows).expect("free base needs no functoriality check")
}

pub fn random_abelian_diagram(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize) -> AbelianDiagram {
    let cat = FreeCategory::new(random_graph(rng, max_vertices, max_arrows)).expect("acyclic");
    random_abelian_diagram_on(rng, &cat)
}

/// Either a free cover `0 → R → F → 𝒜 → 0` or a split sequence.
pub fn random_ses(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize) -> Result<ShortExactSequence> {
    let cat = FreeCategory::new(random_graph(rng, max_vertices, max_arrows))?;
    let a = random_abelian_diagram_on(rng, &cat);
    if rng.gen_bool(0.5) {
        ShortExactSequence::free_cover(&a)
    } else {
        let b = random_abelian_diagram_on(rng, &cat);
        ShortExactSequence::split(&a, &b)
    }
}

/// `1, ℤ/2, ℤ/3, S₃, ℤ/4`, all on three or four points.
pub fn group_pool() -> Vec<PermGroup> {
    vec![
        PermGroup::trivial(3),
        PermGroup::new(3, vec![Perm::from_images(vec![1, 0, 2]).expect("perm")]).expect("group"),
        PermGroup::alternating(3),
        PermGroup::symmetric(3),
        PermGroup::cyclic(4),
    ]
}

/// A random homomorphism between permutation groups, or the trivial one.
pub fn random_group_hom(rng: &mut impl Rng, s: &PermGroup, t: &PermGroup) -> Result<GroupHom> {
    let elems = t.elements()?.list().to_vec();
    for _ in 0..30 {
        let images: Vec<Perm> = s.generators().iter().map(|_| elems.choose(rng).expect("nonempty").clone()).collect();
        if let Ok(h) = GroupHom::new(s.clone(), t.clone(), images) {
            return Ok(h);
        }
    }
    Ok(GroupHom::trivial(s, t))
}

/// Finite permutation-group diagrams on `2..=3` vertices and `1..=3` arrows.
pub fn random_group_diagram(rng: &mut impl Rng) -> Result<GroupDiagram> {
    let cat = FreeCategory::new(random_graph(rng, 3, 3))?;
    let pool = group_pool();
    let objects: Vec<PermGroup> = (0..cat.num_objects()).map(|_| pool.choose(rng).expect("pool").clone()).collect();
    let g = cat.graph();
    let arrows = (0..g.arrows.len())
        .map(|a| Ok(ArrowMap::Perm(random_group_hom(rng, &objects[g.src(a)], &objects[g.dst(a)])?)))
        .collect::<Result<Vec<_>>>()?;
    GroupDiagram::new(cat, objects.into_iter().map(GroupObject::Perm).collect(), arrows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let a = format!("{:?}", random_abelian_diagram(&mut rng(7), 4, 5));
        let b = format!("{:?}", random_abelian_diagram(&mut rng(7), 4, 5));
        assert_eq!(a, b);
    }

    #[test]
    fn generators_produce_valid_objects() {
        let mut r = rng(DEFAULT_SEED);
        for _ in 0..20 {
            random_abelian_diagram(&mut r, 4, 5).validate().unwrap();
            random_group_diagram(&mut r).unwrap();
            random_ses(&mut r, 3, 3).unwrap();
        }
    }
}
