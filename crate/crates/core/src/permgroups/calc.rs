//! Subgroup calculus inside a common ambient permutation group.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use super::group::PermGroup;
use super::hom::GroupHom;
use super::perm::Perm;
use crate::abelian::Matrix;
use crate::error::{Error, Result};
use crate::FpAbelianGroup;

/// Smallest normal subgroup of `g` containing `s`.
pub fn normal_closure(g: &PermGroup, s: &[Perm]) -> Result<PermGroup> {
    // Union of the conjugacy classes of `s` under the generators of `g`.
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue: VecDeque<Perm> = VecDeque::new();
    for x in s {
        if seen.insert(x.clone()) {
            queue.push_back(x.clone());
        }
    }
    let mut order = Vec::new();
    while let Some(x) = queue.pop_front() {
        for h in g.generators() {
            let y = x.conjugate(h);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
        order.push(x);
        if order.len() > g.bound() {
            return Err(Error::bound("normal closure", g.bound()));
        }
    }
    g.generated_by(order)
}

pub fn is_normal(n: &PermGroup, g: &PermGroup) -> Result<bool> {
    for x in n.generators() {
        for h in g.generators() {
            if !n.contains(&x.conjugate(h))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The subgroup generated by `h` and `k`.
pub fn join(h: &PermGroup, k: &PermGroup) -> Result<PermGroup> {
    let all: Vec<Perm> = h.generators().iter().chain(k.generators()).cloned().collect();
    h.generated_by(all)
}

/// `[H, K]`, the normal closure in `⟨H, K⟩` of the generator commutators.
pub fn commutator(h: &PermGroup, k: &PermGroup) -> Result<PermGroup> {
    let ambient = join(h, k)?;
    let mut s = Vec::new();
    for a in h.generators() {
        for b in k.generators() {
            s.push(a.commutator(b));
        }
    }
    normal_closure(&ambient, &s)
}

pub fn intersect(h: &PermGroup, k: &PermGroup) -> Result<PermGroup> {
    let members: Vec<Perm> = h
        .elements()?
        .list()
        .iter()
        .filter(|p| k.contains(p).unwrap_or(false))
        .cloned()
        .collect();
    k.elements()?;
    h.generated_by(members)
}

/// `G/N` acting on the cosets of `N`, with the quotient map.
///
/// Cosets are numbered by their smallest element.
pub fn quotient(g: &PermGroup, n: &PermGroup) -> Result<(PermGroup, GroupHom)> {
    if !n.is_subgroup_of(g)? || !is_normal(n, g)? {
        return Err(Error::NotNormal(format!("{n:?} in {g:?}")));
    }
    let elems = g.elements()?;
    let mut coset_of = vec![usize::MAX; elems.len()];
    let mut count = 0;
    for i in 0..elems.len() {
        if coset_of[i] != usize::MAX {
            continue;
        }
        for m in n.elements()?.list() {
            let j = elems.index_of(&elems.get(i).compose(m)).expect("closed");
            coset_of[j] = count;
        }
        count += 1;
    }
    let degree = count;
    let act = |x: &Perm| -> Perm {
        let mut images = vec![0; degree];
        let mut filled = vec![false; degree];
        for i in 0..elems.len() {
            let c = coset_of[i];
            if !filled[c] {
                filled[c] = true;
                let j = elems.index_of(&x.compose(elems.get(i))).expect("closed");
                images[c] = coset_of[j];
            }
        }
        Perm::from_images(images).expect("coset action is a permutation")
    };
    let images: Vec<Perm> = g.generators().iter().map(act).collect();
    let q = PermGroup::new(degree, images.clone())?;
    let map = GroupHom::named("quotient", g.clone(), q.clone(), images)?;
    Ok((q, map))
}

/// Normal subgroups `K₀, …, K_m` of a common ambient group.
#[derive(Clone, Debug)]
pub struct NormalSubgroupList {
    ambient: PermGroup,
    subgroups: Vec<PermGroup>,
}

impl NormalSubgroupList {
    pub fn new(ambient: PermGroup, subgroups: Vec<PermGroup>) -> Result<Self> {
        for (i, k) in subgroups.iter().enumerate() {
            if !k.is_subgroup_of(&ambient)? || !is_normal(k, &ambient)? {
                return Err(Error::NotNormal(format!("K{i} = {k:?}")));
            }
        }
        Ok(NormalSubgroupList { ambient, subgroups })
    }

    pub fn ambient(&self) -> &PermGroup {
        &self.ambient
    }

    pub fn subgroups(&self) -> &[PermGroup] {
        &self.subgroups
    }

    fn intersection(&self, indices: &[usize]) -> Result<PermGroup> {
        let mut acc = self.subgroups[indices[0]].clone();
        for &i in &indices[1..] {
            acc = intersect(&acc, &self.subgroups[i])?;
        }
        Ok(acc)
    }
}

pub const MAX_FAT_COMMUTATOR_TERMS: usize = 6;

/// `[[K₀, …, K_m]]`: the product, over unordered splittings of `{0, …, m}`
/// into two nonempty parts `I ⊔ J`, of `[∩_I K, ∩_J K]`.
pub fn fat_commutator(list: &NormalSubgroupList) -> Result<PermGroup> {
    let k = list.subgroups.len();
    if k > MAX_FAT_COMMUTATOR_TERMS {
        return Err(Error::PreconditionFailed(format!(
            "fat commutator of {k} subgroups; at most {MAX_FAT_COMMUTATOR_TERMS} supported"
        )));
    }
    let mut product = PermGroup::trivial(list.ambient.degree()).with_bound(list.ambient.bound());
    if k < 2 {
        return Ok(product);
    }
    // Fixing 0 ∈ I enumerates each unordered pair once.
    for mask in 0..(1usize << (k - 1)) {
        let in_i = |t: usize| t == 0 || (mask >> (t - 1)) & 1 == 1;
        let i: Vec<usize> = (0..k).filter(|&t| in_i(t)).collect();
        let j: Vec<usize> = (0..k).filter(|&t| !in_i(t)).collect();
        if j.is_empty() {
            continue;
        }
        let c = commutator(&list.intersection(&i)?, &list.intersection(&j)?)?;
        product = join(&product, &c)?;
    }
    Ok(product)
}

/// `G_ab` with a coordinate vector (over the generators of `G`) for every element.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub group: FpAbelianGroup,
    vectors: Vec<Vec<BigInt>>,
}

impl Abelianization {
    /// Image of the element with the given index, in generator coordinates.
    pub fn vector(&self, element: usize) -> &[BigInt] {
        &self.vectors[element]
    }
}

/// `G/[G, G]`, presented on the generators of `G` with one relation per
/// non-tree edge of the Cayley graph.
pub fn abelianization(g: &PermGroup) -> Result<Abelianization> {
    let elems = g.elements()?;
    let k = g.generators().len();
    let mut vectors: Vec<Option<Vec<BigInt>>> = vec![None; elems.len()];
    let id = elems.index_of(&g.identity()).expect("identity");
    vectors[id] = Some(vec![BigInt::zero(); k]);
    let mut queue = VecDeque::from([id]);
    let mut relations: HashMap<Vec<BigInt>, ()> = HashMap::new();
    let mut edges = Vec::new();
    while let Some(x) = queue.pop_front() {
        for (i, h) in g.generators().iter().enumerate() {
            let y = elems.index_of(&elems.get(x).compose(h)).expect("closed");
            if vectors[y].is_none() {
                let mut v = vectors[x].clone().expect("visited");
                v[i] += 1;
                vectors[y] = Some(v);
                queue.push_back(y);
            } else {
                edges.push((x, i, y));
            }
        }
    }
    let vectors: Vec<Vec<BigInt>> = vectors.into_iter().map(|v| v.expect("connected")).collect();
    for (x, i, y) in edges {
        let mut r = vectors[x].clone();
        r[i] += 1;
        for (a, b) in r.iter_mut().zip(&vectors[y]) {
            *a -= b;
        }
        if r.iter().any(|c| !c.is_zero()) {
            let neg: Vec<BigInt> = r.iter().map(|c| -c).collect();
            if !relations.contains_key(&neg) {
                relations.insert(r, ());
            }
        }
    }
    let mut cols: Vec<Vec<BigInt>> = relations.into_keys().collect();
    cols.sort();
    let group = FpAbelianGroup::new(k, Matrix::from_columns(k, &cols));
    Ok(Abelianization { group, vectors })
}

/// The matrix of `f_ab : G_ab → H_ab` on generator coordinates.
pub fn abelianized_map(f: &GroupHom, src: &Abelianization, dst: &Abelianization) -> Result<crate::AbHom> {
    let te = f.target().elements()?;
    let cols: Vec<Vec<BigInt>> = f
        .images()
        .iter()
        .map(|p| dst.vector(te.index_of(p).expect("image lies in target")).to_vec())
        .collect();
    crate::AbHom::new(
        src.group.clone(),
        dst.group.clone(),
        Matrix::from_columns(dst.group.num_generators(), &cols),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> PermGroup {
        PermGroup::symmetric(3)
    }

    fn brute_commutator(h: &PermGroup, k: &PermGroup) -> PermGroup {
        let mut s = Vec::new();
        for a in h.elements().unwrap().list() {
            for b in k.elements().unwrap().list() {
                s.push(a.commutator(b));
            }
        }
        h.generated_by(s).unwrap()
    }

    #[test]
    fn closures_in_s3() {
        let g = s3();
        let t = Perm::from_images(vec![1, 0, 2]).unwrap();
        let c = Perm::from_images(vec![1, 2, 0]).unwrap();
        assert_eq!(normal_closure(&g, &[t]).unwrap().order().unwrap(), 6);
        assert_eq!(normal_closure(&g, &[c]).unwrap().order().unwrap(), 3);
        assert_eq!(normal_closure(&g, &[]).unwrap().order().unwrap(), 1);
    }

    #[test]
    fn commutator_of_s3_is_a3() {
        let c = commutator(&s3(), &s3()).unwrap();
        assert!(c.same_elements(&PermGroup::alternating(3)).unwrap());
        assert!(c.same_elements(&brute_commutator(&s3(), &s3())).unwrap());
    }

    #[test]
    fn quotient_by_a3() {
        let (q, map) = quotient(&s3(), &PermGroup::alternating(3)).unwrap();
        assert_eq!(q.order().unwrap(), 2);
        assert_eq!(q.degree(), 2);
        assert!(map.kernel().unwrap().same_elements(&PermGroup::alternating(3)).unwrap());
    }

    #[test]
    fn quotient_requires_normality() {
        let z2 = PermGroup::new(3, vec![Perm::from_images(vec![1, 0, 2]).unwrap()]).unwrap();
        assert!(matches!(quotient(&s3(), &z2), Err(Error::NotNormal(_))));
    }

    #[test]
    fn abelianizations() {
        assert_eq!(abelianization(&s3()).unwrap().group.to_string(), "Z/2");
        assert_eq!(abelianization(&PermGroup::alternating(3)).unwrap().group.to_string(), "Z/3");
        assert_eq!(abelianization(&PermGroup::cyclic(4)).unwrap().group.to_string(), "Z/4");
        assert!(abelianization(&PermGroup::alternating(5)).unwrap().group.is_trivial());
        assert!(abelianization(&PermGroup::trivial(2)).unwrap().group.is_trivial());
    }

    #[test]
    fn fat_commutator_small_cases() {
        let g = PermGroup::symmetric(4);
        let a4 = PermGroup::alternating(4);
        let v4 = normal_closure(&g, &[Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()]).unwrap();
        assert_eq!(v4.order().unwrap(), 4);
        let two = NormalSubgroupList::new(g.clone(), vec![a4.clone(), v4.clone()]).unwrap();
        let fat = fat_commutator(&two).unwrap();
        assert!(fat.same_elements(&commutator(&a4, &v4).unwrap()).unwrap());
        let three = NormalSubgroupList::new(g.clone(), vec![a4.clone(), v4.clone(), g.clone()]).unwrap();
        let expected = join(
            &join(
                &commutator(&a4, &intersect(&v4, &g).unwrap()).unwrap(),
                &commutator(&v4, &intersect(&a4, &g).unwrap()).unwrap(),
            )
            .unwrap(),
            &commutator(&g, &intersect(&a4, &v4).unwrap()).unwrap(),
        )
        .unwrap();
        assert!(fat_commutator(&three).unwrap().same_elements(&expected).unwrap());
    }

    #[test]
    fn fat_commutator_of_abelian_ambient_is_trivial() {
        let g = PermGroup::cyclic(6);
        let l = NormalSubgroupList::new(g.clone(), vec![g.clone(), g.clone(), g]).unwrap();
        assert_eq!(fat_commutator(&l).unwrap().order().unwrap(), 1);
    }
}
