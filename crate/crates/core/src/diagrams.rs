//! Functors from a free category (or poset) to groups and to abelian groups.

use std::fmt;

use num_bigint::BigInt;

use crate::abelian::Matrix;
use crate::error::{Error, Result};
use crate::grouphomology::{closed_form_homology, group_homology_classes, induced_map, SymbolicGroup};
use crate::permgroups::{abelianization, abelianized_map, GroupHom, Perm, PermGroup};
use crate::shapes::{ArrowId, CategoryKind, FreeCategory, MorId, ObjId};
use crate::{AbHom, FpAbelianGroup};

/// A word in free generators: `k + 1` stands for `x_k`, `−(k + 1)` for its inverse.
pub type Word = Vec<i64>;

pub fn reduce_word(w: &[i64]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn invert_word(w: &[i64]) -> Word {
    w.iter().rev().map(|l| -l).collect()
}

#[derive(Clone, Debug)]
pub enum GroupObject {
    Perm(PermGroup),
    Symbolic(SymbolicGroup),
}

impl GroupObject {
    /// Rank of a free object (`ℤ` counts as free of rank one).
    pub fn free_rank(&self) -> Option<usize> {
        match self {
            GroupObject::Symbolic(SymbolicGroup::Free(r)) => Some(*r),
            GroupObject::Symbolic(SymbolicGroup::InfiniteCyclic) => Some(1),
            _ => None,
        }
    }

    pub fn as_perm(&self) -> Option<&PermGroup> {
        match self {
            GroupObject::Perm(g) => Some(g),
            GroupObject::Symbolic(_) => None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            GroupObject::Perm(g) => g.is_trivial(),
            GroupObject::Symbolic(s) => matches!(s, SymbolicGroup::Trivial | SymbolicGroup::Cyclic(1) | SymbolicGroup::Free(0)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GroupObject::Perm(g) => match g.order() {
                Ok(n) => format!("permutation group of order {n}"),
                Err(_) => "permutation group".into(),
            },
            GroupObject::Symbolic(s) => format!("{s:?}"),
        }
    }
}

/// An element of a diagram object.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Perm(Perm),
    Word(Word),
    /// The identity of an object with no element model (symbolic non-free).
    Unit,
}

/// The homomorphism assigned to an arrow.
#[derive(Clone, Debug)]
pub enum ArrowMap {
    Perm(GroupHom),
    /// Free group to a permutation group, by generator images.
    FreeToPerm { rank: usize, target: PermGroup, images: Vec<Perm> },
    /// Free group to free group, by generator images as words.
    FreeToFree { source_rank: usize, target_rank: usize, words: Vec<Word> },
    /// Sends everything to the identity.
    Trivial,
}

impl ArrowMap {
    pub fn apply(&self, x: &Element, target: &GroupObject) -> Result<Element> {
        Ok(match (self, x) {
            (ArrowMap::Trivial, _) => identity_element(target),
            (ArrowMap::Perm(f), Element::Perm(p)) => Element::Perm(f.apply(p)?),
            (ArrowMap::FreeToPerm { target, images, .. }, Element::Word(w)) => {
                let mut acc = target.identity();
                for &l in w {
                    let g = &images[(l.unsigned_abs() - 1) as usize];
                    acc = acc.compose(&if l > 0 { g.clone() } else { g.inverse() });
                }
                Element::Perm(acc)
            }
            (ArrowMap::FreeToFree { words, .. }, Element::Word(w)) => {
                let mut acc = Vec::new();
                for &l in w {
                    let img = &words[(l.unsigned_abs() - 1) as usize];
                    acc.extend(if l > 0 { img.clone() } else { invert_word(img) });
                }
                Element::Word(reduce_word(&acc))
            }
            (_, Element::Unit) => identity_element(target),
            _ => return Err(Error::Input(format!("element {x:?} does not fit the arrow's source"))),
        })
    }
}

pub fn identity_element(g: &GroupObject) -> Element {
    match g {
        GroupObject::Perm(p) => Element::Perm(p.identity()),
        GroupObject::Symbolic(_) if g.free_rank().is_some() => Element::Word(vec![]),
        GroupObject::Symbolic(_) => Element::Unit,
    }
}

/// Generators of an object as elements.
pub fn generator_elements(g: &GroupObject) -> Vec<Element> {
    match g {
        GroupObject::Perm(p) => p.generators().iter().cloned().map(Element::Perm).collect(),
        GroupObject::Symbolic(_) => match g.free_rank() {
            Some(r) => (1..=r as i64).map(|k| Element::Word(vec![k])).collect(),
            None => vec![],
        },
    }
}

/// A group-valued functor on a free category or poset.
#[derive(Clone, Debug)]
pub struct GroupDiagram {
    base: FreeCategory,
    objects: Vec<GroupObject>,
    arrows: Vec<ArrowMap>,
}

impl GroupDiagram {
    pub fn new(base: FreeCategory, objects: Vec<GroupObject>, arrows: Vec<ArrowMap>) -> Result<Self> {
        let d = GroupDiagram {
            base,
            objects,
            arrows,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn base(&self) -> &FreeCategory {
        &self.base
    }

    pub fn object(&self, v: ObjId) -> &GroupObject {
        &self.objects[v]
    }

    pub fn objects(&self) -> &[GroupObject] {
        &self.objects
    }

    pub fn arrow(&self, a: ArrowId) -> &ArrowMap {
        &self.arrows[a]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.base.graph().arrows[a].name
    }

    /// Finite permutation group at `v`, or a targeted error.
    pub fn perm_object(&self, v: ObjId) -> Result<&PermGroup> {
        self.objects[v]
            .as_perm()
            .ok_or_else(|| Error::SymbolicObject(self.base.object_name(v).to_string()))
    }

    pub fn is_finite(&self) -> bool {
        self.objects.iter().all(|o| o.as_perm().is_some())
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.base.graph();
        if self.objects.len() != g.vertices.len() || self.arrows.len() != g.arrows.len() {
            return Err(Error::Input("diagram does not cover the graph".into()));
        }
        for (a, map) in self.arrows.iter().enumerate() {
            let (s, t) = (&self.objects[g.src(a)], &self.objects[g.dst(a)]);
            let name = self.arrow_name(a).to_string();
            let mismatch = |detail: &str| Error::Endpoint {
                arrow: name.clone(),
                detail: detail.to_string(),
            };
            match map {
                ArrowMap::Trivial => {}
                ArrowMap::Perm(f) => {
                    let (Some(sp), Some(tp)) = (s.as_perm(), t.as_perm()) else {
                        return Err(mismatch("permutation map between non-permutation objects"));
                    };
                    if sp.generators() != f.source().generators() || tp.generators() != f.target().generators() {
                        return Err(mismatch("map endpoints differ from the assigned groups"));
                    }
                }
                ArrowMap::FreeToPerm { rank, target, images } => {
                    if s.free_rank() != Some(*rank) || images.len() != *rank {
                        return Err(mismatch("source is not free of the stated rank"));
                    }
                    let Some(tp) = t.as_perm() else {
                        return Err(mismatch("target is not a permutation group"));
                    };
                    if tp.generators() != target.generators() {
                        return Err(mismatch("map target differs from the assigned group"));
                    }
                    for p in images {
                        if !tp.contains(p)? {
                            return Err(mismatch(&format!("image {p} is not in the target group")));
                        }
                    }
                }
                ArrowMap::FreeToFree { source_rank, target_rank, words } => {
                    if s.free_rank() != Some(*source_rank) || t.free_rank() != Some(*target_rank) {
                        return Err(mismatch("endpoints are not free of the stated ranks"));
                    }
                    if words.len() != *source_rank
                        || words.iter().flatten().any(|&l| l == 0 || l.unsigned_abs() as usize > *target_rank)
                    {
                        return Err(mismatch("word images do not fit the target rank"));
                    }
                }
            }
        }
        if self.base.kind() == CategoryKind::Poset {
            for (path, canon) in self.base.identified_paths() {
                let canon_word = self.base.morphism(*canon).word.clone();
                let src = self.base.morphism(*canon).src;
                for x in generator_elements(&self.objects[src]) {
                    let lhs = self.apply_path(path, &x)?;
                    let rhs = self.apply_path(&canon_word, &x)?;
                    if lhs != rhs {
                        return Err(Error::Functoriality {
                            left: self.path_label(path),
                            right: self.path_label(&canon_word),
                            detail: format!("generator {x:?} goes to {lhs:?} and {rhs:?}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn path_label(&self, path: &[ArrowId]) -> String {
        path.iter().map(|&a| self.arrow_name(a)).collect::<Vec<_>>().join(".")
    }

    /// Applies the arrows of `path` in order.
    pub fn apply_path(&self, path: &[ArrowId], x: &Element) -> Result<Element> {
        let g = self.base.graph();
        let mut cur = x.clone();
        for &a in path {
            cur = self.arrows[a].apply(&cur, &self.objects[g.dst(a)])?;
        }
        Ok(cur)
    }

    pub fn apply_morphism(&self, m: MorId, x: &Element) -> Result<Element> {
        self.apply_path(&self.base.morphism(m).word.clone(), x)
    }

    /// `𝒢(α)` between permutation objects as a verified homomorphism.
    pub fn morphism_hom(&self, m: MorId) -> Result<GroupHom> {
        let mm = self.base.morphism(m);
        let (s, t) = (self.perm_object(mm.src)?, self.perm_object(mm.dst)?);
        let images = s
            .generators()
            .iter()
            .map(|p| match self.apply_morphism(m, &Element::Perm(p.clone()))? {
                Element::Perm(q) => Ok(q),
                _ => unreachable!("permutation objects carry permutations"),
            })
            .collect::<Result<Vec<_>>>()?;
        GroupHom::named(self.base.morphism_label(m), s.clone(), t.clone(), images)
    }
}

/// An abelian-group-valued functor on a free category or poset.
#[derive(Clone)]
pub struct AbelianDiagram {
    base: FreeCategory,
    objects: Vec<FpAbelianGroup>,
    arrows: Vec<AbHom>,
}

impl AbelianDiagram {
    pub fn new(base: FreeCategory, objects: Vec<FpAbelianGroup>, arrows: Vec<AbHom>) -> Result<Self> {
        let d = AbelianDiagram {
            base,
            objects,
            arrows,
        };
        d.validate()?;
        Ok(d)
    }

    /// The same group at every object with identity maps.
    pub fn constant(base: FreeCategory, g: FpAbelianGroup) -> Self {
        let objects = vec![g.clone(); base.num_objects()];
        let arrows = vec![AbHom::identity(&g); base.graph().arrows.len()];
        AbelianDiagram::new(base, objects, arrows).expect("constant diagram is functorial")
    }

    pub fn base(&self) -> &FreeCategory {
        &self.base
    }

    pub fn object(&self, v: ObjId) -> &FpAbelianGroup {
        &self.objects[v]
    }

    pub fn objects(&self) -> &[FpAbelianGroup] {
        &self.objects
    }

    pub fn arrow(&self, a: ArrowId) -> &AbHom {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[AbHom] {
        &self.arrows
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.base.graph();
        if self.objects.len() != g.vertices.len() || self.arrows.len() != g.arrows.len() {
            return Err(Error::Input("diagram does not cover the graph".into()));
        }
        for (a, f) in self.arrows.iter().enumerate() {
            let same = |x: &FpAbelianGroup, y: &FpAbelianGroup| {
                x.num_generators() == y.num_generators() && x.relations() == y.relations()
            };
            if !same(f.source(), &self.objects[g.src(a)]) || !same(f.target(), &self.objects[g.dst(a)]) {
                return Err(Error::Endpoint {
                    arrow: g.arrows[a].name.clone(),
                    detail: "map endpoints differ from the assigned groups".into(),
                });
            }
        }
        if self.base.kind() == CategoryKind::Poset {
            for (path, canon) in self.base.identified_paths() {
                let lhs = self.path_map(path, self.base.morphism(*canon).src);
                let rhs = self.morphism_map(*canon);
                if !lhs.same_as(&rhs) {
                    let label = |p: &[ArrowId]| {
                        p.iter().map(|&a| g.arrows[a].name.as_str()).collect::<Vec<_>>().join(".")
                    };
                    return Err(Error::Functoriality {
                        left: label(path),
                        right: label(&self.base.morphism(*canon).word),
                        detail: "composites differ".into(),
                    });
                }
            }
        }
        Ok(())
    }

    fn path_map(&self, path: &[ArrowId], src: ObjId) -> AbHom {
        let mut acc = AbHom::identity(&self.objects[src]);
        for &a in path {
            acc = acc.then(&self.arrows[a]);
        }
        acc
    }

    /// `𝒜(α)` for any morphism.
    pub fn morphism_map(&self, m: MorId) -> AbHom {
        let mm = self.base.morphism(m);
        self.path_map(&mm.word, mm.src)
    }

    /// Same base with `other`'s objects and maps summed pointwise.
    pub fn direct_sum(&self, other: &AbelianDiagram) -> AbelianDiagram {
        let objects = self
            .objects
            .iter()
            .zip(&other.objects)
            .map(|(a, b)| FpAbelianGroup::direct_sum(&[a.clone(), b.clone()]))
            .collect::<Vec<_>>();
        let g = self.base.graph();
        let arrows = (0..g.arrows.len())
            .map(|a| {
                let m = Matrix::block_diagonal(&[self.arrows[a].matrix().clone(), other.arrows[a].matrix().clone()]);
                AbHom::new(objects[g.src(a)].clone(), objects[g.dst(a)].clone(), m).expect("sum of maps")
            })
            .collect();
        AbelianDiagram::new(self.base.clone(), objects, arrows).expect("sum of diagrams")
    }
}

impl fmt::Debug for AbelianDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.base.graph();
        write!(f, "AbelianDiagram {{")?;
        for (v, o) in self.objects.iter().enumerate() {
            write!(f, " {}: {o};", g.vertices[v])?;
        }
        for (a, m) in self.arrows.iter().enumerate() {
            write!(f, " {}: {:?};", g.arrows[a].name, m.matrix())?;
        }
        write!(f, " }}")
    }
}

fn abelian_object(o: &GroupObject) -> Result<(FpAbelianGroup, Option<crate::permgroups::Abelianization>)> {
    Ok(match o {
        GroupObject::Perm(p) => {
            let ab = abelianization(p)?;
            (ab.group.clone(), Some(ab))
        }
        GroupObject::Symbolic(s) => (closed_form_homology(*s, 1)?, None),
    })
}

/// Abelianized word: exponent sums.
fn word_vector(w: &[i64], rank: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); rank];
    for &l in w {
        let k = (l.unsigned_abs() - 1) as usize;
        v[k] += if l > 0 { 1 } else { -1 };
    }
    v
}

/// Objects `G_ab`, arrows the induced maps.
pub fn abelianize(d: &GroupDiagram) -> Result<AbelianDiagram> {
    let parts = d.objects.iter().map(abelian_object).collect::<Result<Vec<_>>>()?;
    let objects: Vec<FpAbelianGroup> = parts.iter().map(|(g, _)| g.clone()).collect();
    let g = d.base.graph();
    let mut arrows = Vec::new();
    for (a, map) in d.arrows.iter().enumerate() {
        let (s, t) = (g.src(a), g.dst(a));
        let (src, dst) = (&objects[s], &objects[t]);
        let f = match map {
            ArrowMap::Trivial => AbHom::zero(src, dst),
            ArrowMap::Perm(h) => abelianized_map(h, parts[s].1.as_ref().expect("perm"), parts[t].1.as_ref().expect("perm"))?,
            ArrowMap::FreeToPerm { images, target, .. } => {
                let ab = parts[t].1.as_ref().expect("perm");
                let te = target.elements()?;
                let cols: Vec<Vec<BigInt>> = images
                    .iter()
                    .map(|p| ab.vector(te.index_of(p).expect("validated")).to_vec())
                    .collect();
                AbHom::new(src.clone(), dst.clone(), Matrix::from_columns(dst.num_generators(), &cols))?
            }
            ArrowMap::FreeToFree { words, target_rank, .. } => {
                let cols: Vec<Vec<BigInt>> = words.iter().map(|w| word_vector(w, *target_rank)).collect();
                AbHom::new(src.clone(), dst.clone(), Matrix::from_columns(*target_rank, &cols))?
            }
        };
        arrows.push(f);
    }
    AbelianDiagram::new(d.base.clone(), objects, arrows)
}

/// `H_k ∘ 𝒢`. Permutation objects use bar-complex homology; symbolic
/// objects use closed forms.
pub fn homology_diagram(d: &GroupDiagram, k: usize) -> Result<AbelianDiagram> {
    if k == 1 {
        return abelianize(d);
    }
    let classes = d
        .objects
        .iter()
        .map(|o| match o {
            GroupObject::Perm(p) => Ok(Some(group_homology_classes(p, k)?)),
            GroupObject::Symbolic(_) => Ok(None),
        })
        .collect::<Result<Vec<_>>>()?;
    let objects = d
        .objects
        .iter()
        .zip(&classes)
        .map(|(o, c)| match (o, c) {
            (_, Some(c)) => Ok(c.group.clone()),
            (GroupObject::Symbolic(s), None) => closed_form_homology(*s, k),
            _ => unreachable!(),
        })
        .collect::<Result<Vec<_>>>()?;
    let g = d.base.graph();
    let mut arrows = Vec::new();
    for (a, map) in d.arrows.iter().enumerate() {
        let (src, dst) = (&objects[g.src(a)], &objects[g.dst(a)]);
        let f = if k == 0 {
            AbHom::identity(src)
        } else {
            match map {
                ArrowMap::Perm(h) => induced_map(h, k)?,
                // H_k of a free group vanishes for k ≥ 2.
                _ => AbHom::zero(src, dst),
            }
        };
        arrows.push(f);
    }
    AbelianDiagram::new(d.base.clone(), objects, arrows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::Graph;

    fn pararrows() -> FreeCategory {
        FreeCategory::new(Graph::from_edges(&["a", "b"], &[("u0", "a", "b"), ("u1", "a", "b")]).unwrap()).unwrap()
    }

    fn s3() -> PermGroup {
        PermGroup::symmetric(3)
    }

    pub(crate) fn expar(sub: PermGroup) -> GroupDiagram {
        let inc = GroupHom::inclusion(&sub, &s3()).unwrap();
        GroupDiagram::new(
            pararrows(),
            vec![GroupObject::Perm(sub.clone()), GroupObject::Perm(s3())],
            vec![ArrowMap::Perm(inc), ArrowMap::Perm(GroupHom::trivial(&sub, &s3()))],
        )
        .unwrap()
    }

    fn z2_in_s3() -> PermGroup {
        PermGroup::new(3, vec![Perm::from_images(vec![1, 0, 2]).unwrap()]).unwrap()
    }

    fn a3_in_s3() -> PermGroup {
        PermGroup::new(3, vec![Perm::from_images(vec![1, 2, 0]).unwrap()]).unwrap()
    }

    #[test]
    fn expar2_abelianizes_to_identity_and_zero() {
        let ab = abelianize(&expar(z2_in_s3())).unwrap();
        assert_eq!(ab.object(0).to_string(), "Z/2");
        assert_eq!(ab.object(1).to_string(), "Z/2");
        assert!(ab.arrow(0).is_isomorphism());
        assert!(ab.arrow(1).is_zero());
    }

    #[test]
    fn expar1_abelianizes_to_zero_maps() {
        let ab = abelianize(&expar(a3_in_s3())).unwrap();
        assert_eq!(ab.object(0).to_string(), "Z/3");
        assert!(ab.arrow(0).is_zero() && ab.arrow(1).is_zero());
    }

    #[test]
    fn expar2_homology_diagrams() {
        let d = expar(z2_in_s3());
        let h2 = homology_diagram(&d, 2).unwrap();
        assert!(h2.objects().iter().all(|g| g.is_trivial()));
        let h3 = homology_diagram(&d, 3).unwrap();
        assert_eq!(h3.object(0).to_string(), "Z/2");
        assert_eq!(h3.object(1).to_string(), "Z/6");
        assert!(h3.arrow(0).is_injective());
        assert!(h3.arrow(1).is_zero());
    }

    #[test]
    fn h1_diagram_matches_abelianization() {
        let d = expar(z2_in_s3());
        let h1 = homology_diagram(&d, 1).unwrap();
        let ab = abelianize(&d).unwrap();
        for v in 0..2 {
            assert_eq!(h1.object(v), ab.object(v));
        }
    }

    #[test]
    fn endpoint_mismatch_detected() {
        let inc = GroupHom::inclusion(&z2_in_s3(), &s3()).unwrap();
        let err = GroupDiagram::new(
            pararrows(),
            vec![GroupObject::Perm(a3_in_s3()), GroupObject::Perm(s3())],
            vec![ArrowMap::Perm(inc), ArrowMap::Trivial],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Endpoint { .. }));
    }

    #[test]
    fn poset_functoriality_checked() {
        // a → b → d and a → c → d with ℤ everywhere; one route doubles.
        let g = Graph::from_edges(
            &["a", "b", "c", "d"],
            &[("ab", "a", "b"), ("bd", "b", "d"), ("ac", "a", "c"), ("cd", "c", "d")],
        )
        .unwrap();
        let z = FpAbelianGroup::free(1);
        let id = AbHom::identity(&z);
        let two = AbHom::new(z.clone(), z.clone(), Matrix::from_i64_rows(&[vec![2]])).unwrap();
        let objects = vec![z.clone(); 4];
        let bad = AbelianDiagram::new(
            FreeCategory::poset(g.clone()).unwrap(),
            objects.clone(),
            vec![id.clone(), two.clone(), id.clone(), id.clone()],
        );
        assert!(matches!(bad, Err(Error::Functoriality { .. })));
        assert!(AbelianDiagram::new(FreeCategory::new(g.clone()).unwrap(), objects.clone(), vec![id.clone(), two.clone(), id.clone(), id.clone()]).is_ok());
        assert!(AbelianDiagram::new(FreeCategory::poset(g).unwrap(), objects, vec![id.clone(), two.clone(), two, id]).is_ok());
    }

    #[test]
    fn free_words_reduce() {
        assert_eq!(reduce_word(&[1, 2, -2, -1, 3]), vec![3]);
    }
}
