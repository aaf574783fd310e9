use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use super::group::PermGroup;
use super::perm::Perm;
use crate::error::{Error, Result};

/// A homomorphism of permutation groups, determined by generator images.
#[derive(Clone)]
pub struct GroupHom {
    name: String,
    source: PermGroup,
    target: PermGroup,
    images: Vec<Perm>,
    /// Source element index ↦ target element index.
    table: OnceLock<Vec<usize>>,
}

impl GroupHom {
    pub fn new(source: PermGroup, target: PermGroup, images: Vec<Perm>) -> Result<Self> {
        Self::named("hom", source, target, images)
    }

    /// Builds and checks well-definedness; errors mention `name`.
    pub fn named(
        name: impl Into<String>,
        source: PermGroup,
        target: PermGroup,
        images: Vec<Perm>,
    ) -> Result<Self> {
        let name = name.into();
        let ill = |detail: String| Error::IllDefinedHom {
            name: name.clone(),
            detail,
        };
        if images.len() != source.generators().len() {
            return Err(ill(format!(
                "{} generator images given for {} generators",
                images.len(),
                source.generators().len()
            )));
        }
        for (i, p) in images.iter().enumerate() {
            if !target.contains(p)? {
                return Err(ill(format!("image {p} of g{i} is not in the target group")));
            }
        }
        let h = GroupHom {
            name,
            source,
            target,
            images,
            table: OnceLock::new(),
        };
        let table = h.build_table()?;
        let _ = h.table.set(table);
        Ok(h)
    }

    /// Walks the Cayley graph of the source, extending `x ↦ y` along every
    /// edge `x → x·gᵢ`. A conflict yields two words equal in the source
    /// whose images differ.
    fn build_table(&self) -> Result<Vec<usize>> {
        let se = self.source.elements()?;
        let te = self.target.elements()?;
        let n = se.len();
        let mut table = vec![usize::MAX; n];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let id = se.index_of(&self.source.identity()).expect("identity present");
        table[id] = te.index_of(&self.target.identity()).expect("identity present");
        let mut queue = VecDeque::from([id]);
        let word_to = |parent: &[Option<(usize, usize)>], mut x: usize| {
            let mut w = Vec::new();
            while let Some((p, g)) = parent[x] {
                w.push(g);
                x = p;
            }
            w.reverse();
            w
        };
        while let Some(x) = queue.pop_front() {
            let y = te.get(table[x]).clone();
            for (i, g) in self.source.generators().iter().enumerate() {
                let xg = se.index_of(&se.get(x).compose(g)).expect("closed");
                let yg = te.index_of(&y.compose(&self.images[i])).expect("closed");
                if table[xg] == usize::MAX {
                    table[xg] = yg;
                    parent[xg] = Some((x, i));
                    queue.push_back(xg);
                } else if table[xg] != yg {
                    let mut lhs = word_to(&parent, x);
                    lhs.push(i);
                    let rhs = word_to(&parent, xg);
                    return Err(Error::IllDefinedHom {
                        name: self.name.clone(),
                        detail: format!(
                            "relation {} = {} holds in the source but not between the images",
                            show_word(&lhs),
                            show_word(&rhs)
                        ),
                    });
                }
            }
        }
        Ok(table)
    }

    pub fn identity(g: &PermGroup) -> Self {
        Self::new(g.clone(), g.clone(), g.generators().to_vec()).expect("identity is a homomorphism")
    }

    pub fn trivial(source: &PermGroup, target: &PermGroup) -> Self {
        let images = vec![target.identity(); source.generators().len()];
        Self::new(source.clone(), target.clone(), images).expect("trivial map is a homomorphism")
    }

    /// The inclusion of a subgroup given by the same generating permutations.
    pub fn inclusion(sub: &PermGroup, ambient: &PermGroup) -> Result<Self> {
        Self::new(sub.clone(), ambient.clone(), sub.generators().to_vec())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &PermGroup {
        &self.source
    }

    pub fn target(&self) -> &PermGroup {
        &self.target
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    fn table(&self) -> &[usize] {
        self.table.get().expect("built on construction")
    }

    /// Image of the source element with the given index, as a target index.
    pub fn apply_index(&self, i: usize) -> usize {
        self.table()[i]
    }

    pub fn apply(&self, x: &Perm) -> Result<Perm> {
        let se = self.source.elements()?;
        let i = se
            .index_of(x)
            .ok_or_else(|| Error::Input(format!("{x} is not in the source group")))?;
        Ok(self.target.elements()?.get(self.apply_index(i)).clone())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        let images = self
            .images
            .iter()
            .map(|p| next.apply(p))
            .collect::<Result<Vec<_>>>()?;
        GroupHom::named(
            format!("{}.{}", self.name, next.name),
            self.source.clone(),
            next.target.clone(),
            images,
        )
    }

    pub fn kernel(&self) -> Result<PermGroup> {
        let se = self.source.elements()?;
        let te = self.target.elements()?;
        let e = te.index_of(&self.target.identity()).expect("identity");
        let members = (0..se.len())
            .filter(|&i| self.apply_index(i) == e)
            .map(|i| se.get(i).clone());
        self.source.generated_by(members.collect::<Vec<_>>())
    }

    pub fn image(&self) -> Result<PermGroup> {
        self.target.generated_by(self.images.clone())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.order()? == 1)
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(Perm::is_identity)
    }
}

fn show_word(w: &[usize]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter().map(|g| format!("g{g}")).collect::<Vec<_>>().join("*")
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({}: {:?} ↦ {:?})", self.name, self.source.generators(), self.images)
    }
}

/// Order of the subgroup of `G × H` generated by the pairs `(gᵢ, f(gᵢ))`.
/// The assignment is a well-defined homomorphism exactly when this equals `|G|`.
pub fn graph_subgroup_order(source: &PermGroup, target: &PermGroup, images: &[Perm]) -> Result<usize> {
    let degree = source.degree() + target.degree();
    let gens = source
        .generators()
        .iter()
        .zip(images)
        .map(|(g, h)| g.juxtapose(h))
        .collect();
    PermGroup::new(degree, gens)?
        .with_bound(source.bound().saturating_mul(target.order()?))
        .order()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> PermGroup {
        PermGroup::symmetric(3)
    }

    #[test]
    fn inclusion_of_z2_into_s3() {
        let z2 = PermGroup::new(3, vec![Perm::from_images(vec![1, 0, 2]).unwrap()]).unwrap();
        let f = GroupHom::inclusion(&z2, &s3()).unwrap();
        assert!(f.is_injective().unwrap());
        assert_eq!(f.image().unwrap().order().unwrap(), 2);
    }

    #[test]
    fn trivial_hom_kernel_is_source() {
        let z2 = PermGroup::cyclic(2);
        let f = GroupHom::trivial(&z2, &s3());
        assert_eq!(f.kernel().unwrap().order().unwrap(), 2);
    }

    #[test]
    fn z2_to_z3_nontrivial_is_rejected_with_witness() {
        let z2 = PermGroup::cyclic(2);
        let z3 = PermGroup::cyclic(3);
        let err = GroupHom::named("u", z2.clone(), z3.clone(), z3.generators().to_vec()).unwrap_err();
        match err {
            Error::IllDefinedHom { name, detail } => {
                assert_eq!(name, "u");
                assert!(detail.contains("g0*g0"), "{detail}");
            }
            e => panic!("unexpected {e:?}"),
        }
        assert_eq!(graph_subgroup_order(&z2, &z3, z3.generators()).unwrap(), 6);
    }

    #[test]
    fn sign_map_s3_to_z2() {
        let z2 = PermGroup::cyclic(2);
        let t = z2.generators()[0].clone();
        let f = GroupHom::new(s3(), z2, vec![t, Perm::identity(2)]).unwrap();
        assert_eq!(f.kernel().unwrap().order().unwrap(), 3);
        assert_eq!(graph_subgroup_order(f.source(), f.target(), f.images()).unwrap(), 6);
    }
}
