//! Colimits of group diagrams: presentations, coset enumeration, and a
//! normal-closure shortcut for diagrams whose arrows all end at one object.

use std::fmt;

use num_bigint::BigInt;

use crate::diagrams::{generator_elements, ArrowMap, Element, GroupDiagram, GroupObject, Word};
use crate::abelian::Matrix;
use crate::error::{Error, Result};
use crate::FpAbelianGroup;
use crate::grouphomology::SymbolicGroup;
use crate::permgroups::{normal_closure, quotient, GroupHom, Perm, PermGroup};
use crate::shapes::ObjId;

pub const DEFAULT_MAX_COSETS: usize = 50_000;

/// `⟨ generators | relators ⟩`; letters are `±(k + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let k = generators.len() as i64;
        if let Some(r) = relators.iter().find(|r| r.iter().any(|&l| l == 0 || l.abs() > k)) {
            return Err(Error::Input(format!("relator {r:?} uses an unknown generator")));
        }
        Ok(GroupPresentation { generators, relators })
    }

    /// Exponent sums of the relators, one column each.
    pub fn abelianization(&self) -> FpAbelianGroup {
        let mut m = Matrix::zeros(self.generators.len(), self.relators.len());
        for (j, r) in self.relators.iter().enumerate() {
            for &l in r {
                m[((l.unsigned_abs() - 1) as usize, j)] += BigInt::from(l.signum());
            }
        }
        FpAbelianGroup::new(self.generators.len(), m)
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &Word| {
            if w.is_empty() {
                return "1".to_string();
            }
            w.iter()
                .map(|&l| {
                    let g = &self.generators[(l.unsigned_abs() - 1) as usize];
                    if l > 0 { g.clone() } else { format!("{g}^-1") }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        let rels: Vec<String> = self.relators.iter().map(show).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// Outcome of coset enumeration over the trivial subgroup.
#[derive(Clone, Debug)]
pub enum CosetTable {
    /// `action[c][j]` is coset `c · x_j`; one row per element of the group.
    Complete { action: Vec<Vec<usize>> },
    Exceeded { bound: usize },
}

impl CosetTable {
    pub fn num_cosets(&self) -> Option<usize> {
        match self {
            CosetTable::Complete { action } => Some(action.len()),
            CosetTable::Exceeded { .. } => None,
        }
    }

    /// The regular representation: `x_j ↦` the inverse of right multiplication,
    /// which turns the right action into a homomorphism for `Perm::compose`.
    pub fn generator_perms(&self) -> Option<Vec<Perm>> {
        let CosetTable::Complete { action } = self else {
            return None;
        };
        let k = action.first().map_or(0, Vec::len);
        Some(
            (0..k)
                .map(|j| {
                    let images = action.iter().map(|row| row[j]).collect();
                    Perm::from_images(images).expect("complete table columns are bijections").inverse()
                })
                .collect(),
        )
    }
}

const NONE: usize = usize::MAX;

struct Enumerator {
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    cols: usize,
    max: usize,
    queue: Vec<usize>,
}

struct Overflow;

impl Enumerator {
    fn rep(&mut self, mut k: usize) -> usize {
        let mut root = k;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[k] != root {
            let next = self.parent[k];
            self.parent[k] = root;
            k = next;
        }
        root
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), Overflow> {
        if self.table.len() >= self.max {
            return Err(Overflow);
        }
        let n = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(n);
        self.table[c][x] = n;
        self.table[n][x ^ 1] = c;
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (p, q) = (self.rep(a), self.rep(b));
        if p != q {
            let (lo, hi) = (p.min(q), p.max(q));
            self.parent[hi] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.table[g][x];
                if d == NONE {
                    continue;
                }
                if self.table[d][x ^ 1] == g {
                    self.table[d][x ^ 1] = NONE;
                }
                let (mu, nu) = (self.rep(g), self.rep(d));
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x];
                    self.merge(nu, t);
                } else if self.table[nu][x ^ 1] != NONE {
                    let t = self.table[nu][x ^ 1];
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][x ^ 1] = mu;
                }
            }
        }
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), Overflow> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][w[j as usize] ^ 1] != NONE {
                b = self.table[b][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][w[i] ^ 1] = f;
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }
}

/// Felsch-free HLT coset enumeration of `p` over the trivial subgroup.
/// Deterministic; fails with [`CosetTable::Exceeded`] once `max_cosets`
/// cosets have been defined.
pub fn todd_coxeter(p: &GroupPresentation, max_cosets: usize) -> CosetTable {
    let k = p.generators.len();
    let cols = 2 * k;
    let letters = |w: &Word| -> Vec<usize> {
        w.iter()
            .map(|&l| 2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0))
            .collect()
    };
    let relators: Vec<Vec<usize>> = p.relators.iter().map(letters).collect();
    let mut e = Enumerator {
        table: vec![vec![NONE; cols]],
        parent: vec![0],
        cols,
        max: max_cosets.max(1),
        queue: Vec::new(),
    };
    let mut c = 0;
    while c < e.table.len() {
        if e.live(c) {
            for r in &relators {
                if !e.live(c) {
                    break;
                }
                if e.scan_and_fill(c, r).is_err() {
                    return CosetTable::Exceeded { bound: max_cosets };
                }
            }
            for x in 0..cols {
                if e.live(c) && e.table[c][x] == NONE && e.define(c, x).is_err() {
                    return CosetTable::Exceeded { bound: max_cosets };
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.live(c)).collect();
    let mut number = vec![NONE; e.table.len()];
    for (i, &c) in live.iter().enumerate() {
        number[c] = i;
    }
    let action = live
        .iter()
        .map(|&c| (0..k).map(|j| number[e.rep(e.table[c][2 * j])]).collect())
        .collect();
    CosetTable::Complete { action }
}

/// Where each object's presentation generators sit.
#[derive(Clone, Debug)]
enum Block {
    /// Generator `first + i − 1` is the element with index `i ≥ 1`.
    Elements { first: usize },
    Free { first: usize },
    Cyclic { gen: usize },
    Empty,
}

/// The colimit presentation together with its generator layout.
#[derive(Clone, Debug)]
pub struct ColimPresentation {
    pub presentation: GroupPresentation,
    blocks: Vec<Block>,
}

impl ColimPresentation {
    /// The word representing an element of the object at `v`.
    fn word(&self, d: &GroupDiagram, v: ObjId, x: &Element) -> Result<Word> {
        Ok(match (&self.blocks[v], x) {
            (Block::Elements { first }, Element::Perm(p)) => {
                let i = d.perm_object(v)?.elements()?.index_of(p).expect("element of object");
                if i == 0 { vec![] } else { vec![(first + i) as i64] }
            }
            (Block::Free { first }, Element::Word(w)) => {
                w.iter().map(|&l| l.signum() * (l.abs() + *first as i64)).collect()
            }
            (_, Element::Unit) | (Block::Empty, _) => vec![],
            (Block::Cyclic { .. }, _) | (_, _) => {
                return Err(Error::Unsupported("element without a word model".into()))
            }
        })
    }

    fn generator_words(&self, d: &GroupDiagram, v: ObjId) -> Result<Vec<Word>> {
        match self.blocks[v] {
            Block::Cyclic { gen } => Ok(vec![vec![gen as i64 + 1]]),
            _ => generator_elements(d.object(v)).iter().map(|x| self.word(d, v, x)).collect(),
        }
    }
}

/// Free product of multiplication-table presentations of the objects,
/// modulo `in_{c'}(𝒢(α)g) = in_c(g)` for every arrow and generator `g`.
pub fn colim_presentation(d: &GroupDiagram) -> Result<ColimPresentation> {
    let cat = d.base();
    let mut generators = Vec::new();
    let mut relators = Vec::new();
    let mut blocks = Vec::new();
    for v in 0..cat.num_objects() {
        let name = cat.object_name(v);
        let first = generators.len();
        match d.object(v) {
            GroupObject::Perm(g) => {
                let e = g.elements()?;
                let n = e.len();
                for i in 1..n {
                    generators.push(format!("{name}:{}", e.get(i)));
                }
                let gen = |i: usize| (first + i) as i64;
                for a in 1..n {
                    for b in 1..n {
                        let ab = e.index_of(&e.get(a).compose(e.get(b))).expect("closed");
                        let mut r = vec![gen(a), gen(b)];
                        if ab != 0 {
                            r.push(-gen(ab));
                        }
                        relators.push(r);
                    }
                }
                blocks.push(Block::Elements { first });
            }
            GroupObject::Symbolic(s) => match (s, d.object(v).free_rank()) {
                (_, Some(r)) => {
                    for j in 0..r {
                        generators.push(format!("{name}:x{j}"));
                    }
                    blocks.push(Block::Free { first });
                }
                (SymbolicGroup::Cyclic(m), None) if *m > 1 => {
                    generators.push(format!("{name}:c"));
                    relators.push(vec![first as i64 + 1; *m as usize]);
                    blocks.push(Block::Cyclic { gen: first });
                }
                _ => blocks.push(Block::Empty),
            },
        }
    }
    let mut cp = ColimPresentation {
        presentation: GroupPresentation::new(generators, vec![])?,
        blocks,
    };
    let g = cat.graph();
    for a in 0..g.arrows.len() {
        let (s, t) = (g.src(a), g.dst(a));
        let src_words = cp.generator_words(d, s)?;
        let images: Vec<Word> = match (d.arrow(a), &cp.blocks[s]) {
            (ArrowMap::Trivial, _) | (_, Block::Cyclic { .. }) => vec![vec![]; src_words.len()],
            _ => generator_elements(d.object(s))
                .iter()
                .map(|x| cp.word(d, t, &d.arrow(a).apply(x, d.object(t))?))
                .collect::<Result<_>>()?,
        };
        for (img, w) in images.iter().zip(&src_words) {
            let mut r = img.clone();
            r.extend(w.iter().rev().map(|l| -l));
            let r = crate::diagrams::reduce_word(&r);
            if !r.is_empty() {
                relators.push(r);
            }
        }
    }
    cp.presentation.relators = relators;
    Ok(cp)
}

/// The colimit group, or an honest "unknown".
#[derive(Clone, Debug)]
pub enum ColimResult {
    Trivial,
    /// The group with, per object, the images of that object's generators.
    Finite { group: PermGroup, insertions: Vec<Vec<Perm>> },
    Unknown { bound: usize },
}

impl ColimResult {
    pub fn is_trivial(&self) -> bool {
        matches!(self, ColimResult::Trivial)
    }

    pub fn order(&self) -> Result<Option<usize>> {
        Ok(match self {
            ColimResult::Trivial => Some(1),
            ColimResult::Finite { group, .. } => Some(group.order()?),
            ColimResult::Unknown { .. } => None,
        })
    }

    /// Verifies that every insertion is a homomorphism and that
    /// `in_{c'} ∘ 𝒢(α) = in_c` on generators for every arrow.
    pub fn verify(&self, d: &GroupDiagram) -> Result<()> {
        let ColimResult::Finite { group, insertions } = self else {
            return Ok(());
        };
        let cat = d.base();
        let mut homs: Vec<Option<GroupHom>> = Vec::new();
        for v in 0..cat.num_objects() {
            homs.push(match d.object(v) {
                GroupObject::Perm(g) => Some(GroupHom::named(
                    format!("in_{}", cat.object_name(v)),
                    g.clone(),
                    group.clone(),
                    insertions[v].clone(),
                )?),
                _ => None,
            });
        }
        let eval = |v: ObjId, x: &Element| -> Result<Perm> {
            Ok(match (x, &homs[v]) {
                (Element::Perm(p), Some(h)) => h.apply(p)?,
                (Element::Word(w), _) => {
                    let mut acc = group.identity();
                    for &l in w {
                        let g = &insertions[v][(l.unsigned_abs() - 1) as usize];
                        acc = acc.compose(&if l > 0 { g.clone() } else { g.inverse() });
                    }
                    acc
                }
                _ => group.identity(),
            })
        };
        let g = cat.graph();
        for a in 0..g.arrows.len() {
            let (s, t) = (g.src(a), g.dst(a));
            for x in generator_elements(d.object(s)) {
                let y = d.arrow(a).apply(&x, d.object(t))?;
                if eval(t, &y)? != eval(s, &x)? {
                    return Err(Error::PreconditionFailed(format!(
                        "colimit insertions do not commute with `{}`",
                        g.arrows[a].name
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColimStrategy {
    /// Normal closure when the shape allows, coset enumeration otherwise.
    Auto,
    ToddCoxeter,
    NormalClosure,
}

/// The object every arrow points to, when each other object has an arrow
/// into it and that object is a permutation group.
fn star_sink(d: &GroupDiagram) -> Option<ObjId> {
    let g = d.base().graph();
    let first = g.arrows.first()?;
    let t = g.vertex_index(&first.dst)?;
    let all_in = (0..g.arrows.len()).all(|a| g.dst(a) == t && g.src(a) != t);
    let covered = (0..g.vertices.len()).all(|v| v == t || (0..g.arrows.len()).any(|a| g.src(a) == v));
    (all_in && covered && d.object(t).as_perm().is_some()).then_some(t)
}

pub fn colim_group(d: &GroupDiagram, max_cosets: usize) -> Result<ColimResult> {
    colim_group_with(d, max_cosets, ColimStrategy::Auto)
}

pub fn colim_group_with(d: &GroupDiagram, max_cosets: usize, strategy: ColimStrategy) -> Result<ColimResult> {
    let sink = star_sink(d);
    match (strategy, sink) {
        (ColimStrategy::NormalClosure, None) => {
            Err(Error::Unsupported("normal-closure colimit needs all arrows to end at one object".into()))
        }
        (ColimStrategy::Auto | ColimStrategy::NormalClosure, Some(t)) => by_normal_closure(d, t),
        _ => by_coset_enumeration(d, max_cosets),
    }
}

fn by_normal_closure(d: &GroupDiagram, t: ObjId) -> Result<ColimResult> {
    let gt = d.perm_object(t)?;
    let g = d.base().graph();
    let mut relators = Vec::new();
    let mut first_image: Vec<Option<Vec<Perm>>> = vec![None; g.vertices.len()];
    for a in 0..g.arrows.len() {
        let s = g.src(a);
        let imgs = generator_elements(d.object(s))
            .iter()
            .map(|x| match d.arrow(a).apply(x, d.object(t))? {
                Element::Perm(p) => Ok(p),
                _ => unreachable!("sink is a permutation group"),
            })
            .collect::<Result<Vec<_>>>()?;
        match &first_image[s] {
            None => first_image[s] = Some(imgs),
            Some(base) => {
                for (p, q) in imgs.iter().zip(base) {
                    relators.push(p.compose(&q.inverse()));
                }
            }
        }
    }
    let n = normal_closure(gt, &relators)?;
    let (q, map) = quotient(gt, &n)?;
    if q.order()? == 1 {
        return Ok(ColimResult::Trivial);
    }
    let insertions = (0..g.vertices.len())
        .map(|v| {
            let imgs: Vec<Perm> = if v == t { gt.generators().to_vec() } else { first_image[v].clone().expect("covered") };
            imgs.iter().map(|p| map.apply(p)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ColimResult::Finite { group: q, insertions })
}

fn by_coset_enumeration(d: &GroupDiagram, max_cosets: usize) -> Result<ColimResult> {
    let cp = colim_presentation(d)?;
    let table = todd_coxeter(&cp.presentation, max_cosets);
    let Some(perms) = table.generator_perms() else {
        return Ok(ColimResult::Unknown { bound: max_cosets });
    };
    let order = table.num_cosets().expect("complete");
    if order == 1 {
        return Ok(ColimResult::Trivial);
    }
    let eval = |w: &Word| {
        let mut acc = Perm::identity(order);
        for &l in w {
            let g = &perms[(l.unsigned_abs() - 1) as usize];
            acc = acc.compose(&if l > 0 { g.clone() } else { g.inverse() });
        }
        acc
    };
    let insertions: Vec<Vec<Perm>> = (0..d.base().num_objects())
        .map(|v| Ok(cp.generator_words(d, v)?.iter().map(eval).collect()))
        .collect::<Result<_>>()?;
    let ambient = PermGroup::new(order, perms)?.with_bound(order + 1);
    let group = ambient.generated_by(insertions.iter().flatten().cloned())?;
    Ok(ColimResult::Finite { group, insertions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{FreeCategory, Graph};

    fn pararrows() -> FreeCategory {
        FreeCategory::new(Graph::from_edges(&["a", "b"], &[("u0", "a", "b"), ("u1", "a", "b")]).unwrap()).unwrap()
    }

    fn expar(sub: PermGroup) -> GroupDiagram {
        let s3 = PermGroup::symmetric(3);
        GroupDiagram::new(
            pararrows(),
            vec![GroupObject::Perm(sub.clone()), GroupObject::Perm(s3.clone())],
            vec![ArrowMap::Perm(GroupHom::inclusion(&sub, &s3).unwrap()), ArrowMap::Trivial],
        )
        .unwrap()
    }

    fn sub(images: Vec<usize>) -> PermGroup {
        PermGroup::new(3, vec![Perm::from_images(images).unwrap()]).unwrap()
    }

    #[test]
    fn small_presentations() {
        let p = GroupPresentation::new(vec!["a".into()], vec![vec![1, 1]]).unwrap();
        assert_eq!(todd_coxeter(&p, 100).num_cosets(), Some(2));
        let free = GroupPresentation::new(vec!["a".into()], vec![]).unwrap();
        assert!(matches!(todd_coxeter(&free, 100), CosetTable::Exceeded { .. }));
        // ⟨a, b | a³, b², abab⟩ ≅ S₃
        let s3 = GroupPresentation::new(vec!["a".into(), "b".into()], vec![vec![1, 1, 1], vec![2, 2], vec![1, 2, 1, 2]]).unwrap();
        assert_eq!(todd_coxeter(&s3, 1000).num_cosets(), Some(6));
        assert_eq!(s3.abelianization(), FpAbelianGroup::cyclic(2.into()));
        // Z/2 * Z/3 is infinite but its abelianization is Z/6.
        let free_product = GroupPresentation::new(vec!["a".into(), "b".into()], vec![vec![1, 1], vec![2, 2, 2]]).unwrap();
        assert_eq!(free_product.abelianization(), FpAbelianGroup::cyclic(6.into()));
        assert_eq!(free.abelianization(), FpAbelianGroup::free(1));
    }

    #[test]
    fn multiplication_table_of_s3() {
        let one = FreeCategory::new(Graph::from_edges(&["x"], &[]).unwrap()).unwrap();
        let d = GroupDiagram::new(one, vec![GroupObject::Perm(PermGroup::symmetric(3))], vec![]).unwrap();
        let cp = colim_presentation(&d).unwrap();
        assert_eq!(cp.presentation.generators.len(), 5);
        assert_eq!(todd_coxeter(&cp.presentation, 1000).num_cosets(), Some(6));
        let r = colim_group(&d, 1000).unwrap();
        assert_eq!(r.order().unwrap(), Some(6));
        r.verify(&d).unwrap();
    }

    #[test]
    fn expar1_both_variants_both_strategies() {
        for strategy in [ColimStrategy::Auto, ColimStrategy::ToddCoxeter] {
            let d = expar(sub(vec![1, 2, 0]));
            let r = colim_group_with(&d, 10_000, strategy).unwrap();
            assert_eq!(r.order().unwrap(), Some(2));
            r.verify(&d).unwrap();
            let d = expar(sub(vec![1, 0, 2]));
            assert!(colim_group_with(&d, 10_000, strategy).unwrap().is_trivial());
        }
    }

    #[test]
    fn sphere_diagram_colimit_is_trivial() {
        let cat = FreeCategory::new(Graph::from_edges(&["a", "b", "c"], &[("l", "a", "b"), ("r", "a", "c")]).unwrap()).unwrap();
        let d = GroupDiagram::new(
            cat,
            vec![
                GroupObject::Symbolic(SymbolicGroup::Free(1)),
                GroupObject::Perm(PermGroup::trivial(1)),
                GroupObject::Perm(PermGroup::trivial(1)),
            ],
            vec![ArrowMap::Trivial, ArrowMap::Trivial],
        )
        .unwrap();
        assert!(colim_group(&d, 1000).unwrap().is_trivial());
    }

    #[test]
    fn free_object_alone_is_unknown() {
        let one = FreeCategory::new(Graph::from_edges(&["x"], &[]).unwrap()).unwrap();
        let d = GroupDiagram::new(one, vec![GroupObject::Symbolic(SymbolicGroup::Free(1))], vec![]).unwrap();
        assert!(matches!(colim_group(&d, 200).unwrap(), ColimResult::Unknown { bound: 200 }));
    }
}
