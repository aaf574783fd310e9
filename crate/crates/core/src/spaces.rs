//! Finite pointed simplicial sets truncated at a dimension cap, and the
//! constructions used to cross-check diagram homology against spaces:
//! classifying spaces, pointed homotopy colimits, and reduced homology.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::abelian::Matrix;
use crate::diagrams::{ArrowMap, GroupDiagram, GroupObject};
use crate::error::{Error, Result};
use crate::grouphomology::{multiplication_table, SymbolicGroup};
use crate::permgroups::{GroupHom, PermGroup};
use crate::shapes::{ChainTable, FreeCategory, MorId};
use crate::simplicial::SimplicialAbelianGroup;
use crate::{ChainComplex, FpAbelianGroup};

/// Largest number of simplices allowed in a single dimension.
pub const DEFAULT_SIMPLEX_BOUND: usize = 5_000_000;

/// Simplices are integers `0..count(n)`; `base(n)` is the degenerate copy of
/// the base vertex. Faces exist for `1 ≤ n ≤ cap`, degeneracies for `n < cap`.
#[derive(Clone, Debug)]
pub struct FiniteSimplicialSet {
    counts: Vec<usize>,
    faces: Vec<Vec<usize>>,
    degens: Vec<Vec<usize>>,
    base: Vec<usize>,
}

impl FiniteSimplicialSet {
    /// Tabulates `face(n, x, i)` and `degeneracy(n, x, i)` for every simplex.
    pub fn from_fn(
        counts: Vec<usize>,
        base: Vec<usize>,
        mut face: impl FnMut(usize, usize, usize) -> usize,
        mut degeneracy: impl FnMut(usize, usize, usize) -> usize,
    ) -> Self {
        let cap = counts.len() - 1;
        let mut faces = vec![Vec::new()];
        for n in 1..=cap {
            let mut t = Vec::with_capacity(counts[n] * (n + 1));
            for x in 0..counts[n] {
                t.extend((0..=n).map(|i| face(n, x, i)));
            }
            faces.push(t);
        }
        let mut degens = Vec::new();
        for n in 0..cap {
            let mut t = Vec::with_capacity(counts[n] * (n + 1));
            for x in 0..counts[n] {
                t.extend((0..=n).map(|i| degeneracy(n, x, i)));
            }
            degens.push(t);
        }
        degens.push(Vec::new());
        FiniteSimplicialSet { counts, faces, degens, base }
    }

    pub fn cap(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts[n]
    }

    pub fn base(&self, n: usize) -> usize {
        self.base[n]
    }

    pub fn face(&self, n: usize, x: usize, i: usize) -> usize {
        self.faces[n][x * (n + 1) + i]
    }

    pub fn degeneracy(&self, n: usize, x: usize, i: usize) -> usize {
        self.degens[n][x * (n + 1) + i]
    }

    /// `x = sᵢ dᵢ x` for some `i`.
    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        n > 0 && (0..n).any(|i| self.degeneracy(n - 1, self.face(n, x, i), i) == x)
    }

    /// Simplices in the image of some degeneracy, read off the tables.
    pub fn degenerate_images(&self, n: usize) -> Vec<bool> {
        let mut hit = vec![false; self.counts[n]];
        if n > 0 {
            for &y in &self.degens[n - 1] {
                hit[y] = true;
            }
        }
        hit
    }

    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        (0..self.counts[n]).filter(|&x| !self.is_degenerate(n, x)).collect()
    }

    /// Checks every simplicial identity and base-point compatibility on all
    /// stored simplices; returns the number of equations checked.
    pub fn check_identities(&self) -> Result<usize> {
        let cap = self.cap();
        let mut checked = 0;
        let fail = |what: String| Err(Error::PreconditionFailed(what));
        for n in 0..=cap {
            for x in 0..self.counts[n] {
                if n >= 2 {
                    for j in 1..=n {
                        for i in 0..j {
                            checked += 1;
                            let l = self.face(n - 1, self.face(n, x, j), i);
                            let r = self.face(n - 1, self.face(n, x, i), j - 1);
                            if l != r {
                                return fail(format!("d{i} d{j} ≠ d{} d{i} on simplex {x} of dim {n}", j - 1));
                            }
                        }
                    }
                }
                if n < cap {
                    for j in 0..=n {
                        let s = self.degeneracy(n, x, j);
                        for i in 0..=n + 1 {
                            checked += 1;
                            let l = self.face(n + 1, s, i);
                            let r = if i < j {
                                self.degeneracy(n - 1, self.face(n, x, i), j - 1)
                            } else if i == j || i == j + 1 {
                                x
                            } else {
                                self.degeneracy(n - 1, self.face(n, x, i - 1), j)
                            };
                            if l != r {
                                return fail(format!("d{i} s{j} on simplex {x} of dim {n}"));
                            }
                        }
                        if n + 1 < cap {
                            for i in 0..=j {
                                checked += 1;
                                let l = self.degeneracy(n + 1, s, i);
                                let r = self.degeneracy(n + 1, self.degeneracy(n, x, i), j + 1);
                                if l != r {
                                    return fail(format!("s{i} s{j} on simplex {x} of dim {n}"));
                                }
                            }
                        }
                    }
                }
            }
            let b = self.base[n];
            if n > 0 && (0..=n).any(|i| self.face(n, b, i) != self.base[n - 1]) {
                return fail(format!("faces of the base point in dim {n}"));
            }
            if n < cap && (0..=n).any(|i| self.degeneracy(n, b, i) != self.base[n + 1]) {
                return fail(format!("degeneracies of the base point in dim {n}"));
            }
            for x in 0..self.counts[n] {
                checked += 1;
                if self.is_degenerate(n, x) != self.degenerate_images(n)[x] {
                    return fail(format!("degeneracy detection disagrees on simplex {x} of dim {n}"));
                }
            }
        }
        Ok(checked)
    }

    /// Normalized chains augmented by `ℤ` in degree −1, shifted up by one,
    /// through dimension `top`.
    fn reduced_complex(&self, top: usize) -> Result<ChainComplex> {
        let nd: Vec<Vec<usize>> = (0..=top).map(|n| self.nondegenerate(n)).collect();
        let mut ranks = vec![1];
        ranks.extend(nd.iter().map(Vec::len));
        let mut diffs = vec![Matrix::from_rows(nd[0].len(), vec![vec![BigInt::from(1); nd[0].len()]])];
        for n in 1..=top {
            let pos: HashMap<usize, usize> = nd[n - 1].iter().enumerate().map(|(r, &y)| (y, r)).collect();
            let mut m = Matrix::zeros(nd[n - 1].len(), nd[n].len());
            for (c, &x) in nd[n].iter().enumerate() {
                for i in 0..=n {
                    if let Some(&r) = pos.get(&self.face(n, x, i)) {
                        m[(r, c)] += if i % 2 == 0 { 1 } else { -1 };
                    }
                }
            }
            diffs.push(m);
        }
        ChainComplex::free(&ranks, diffs)
    }

    /// `H̃_k` for `k ≤ cap − 1`.
    pub fn reduced_homology(&self, k: usize) -> Result<FpAbelianGroup> {
        Ok(self.reduced_homology_table(k)?.pop().expect("nonempty"))
    }

    /// `[H̃_0, …, H̃_max]`.
    pub fn reduced_homology_table(&self, max: usize) -> Result<Vec<FpAbelianGroup>> {
        if max + 1 > self.cap() {
            return Err(Error::PreconditionFailed(format!(
                "reduced homology in dimension {max} needs simplices through dimension {}, cap is {}",
                max + 1,
                self.cap()
            )));
        }
        let c = self.reduced_complex(max + 1)?;
        Ok((0..=max).map(|k| c.homology_group(k + 1)).collect())
    }
}

/// The one-point space.
pub fn point(cap: usize) -> FiniteSimplicialSet {
    FiniteSimplicialSet::from_fn(vec![1; cap + 1], vec![0; cap + 1], |_, _, _| 0, |_, _, _| 0)
}

fn checked_count(per: usize, n: usize, bound: usize) -> Result<usize> {
    (0..n)
        .try_fold(1usize, |acc, _| acc.checked_mul(per))
        .filter(|&c| c <= bound)
        .ok_or_else(|| Error::bound(format!("simplices in dimension {n}"), bound))
}

fn digits(mut x: usize, base: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = x % base;
        x /= base;
    }
    out
}

fn undigits(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &d| acc * base + d)
}

/// Nerve of a finite monoid given by `mul(a, b)` on `0..order`, with unit `0`.
/// An `n`-simplex is a tuple `(g₁, …, g_n)` read as a base-`order` numeral.
fn monoid_nerve(order: usize, cap: usize, bound: usize, mul: impl Fn(usize, usize) -> usize) -> Result<FiniteSimplicialSet> {
    let counts = (0..=cap).map(|n| checked_count(order, n, bound)).collect::<Result<Vec<_>>>()?;
    Ok(FiniteSimplicialSet::from_fn(
        counts,
        vec![0; cap + 1],
        |n, x, i| {
            let mut t = digits(x, order, n);
            if i == 0 {
                t.remove(0);
            } else if i == n {
                t.pop();
            } else {
                let p = mul(t[i - 1], t[i]);
                t.splice(i - 1..=i, [p]);
            }
            undigits(&t, order)
        },
        |n, x, i| {
            let mut t = digits(x, order, n);
            t.insert(i, 0);
            undigits(&t, order)
        },
    ))
}

/// `BG`: `n`-simplices are `n`-tuples of elements, indexed as in
/// [`PermGroup::elements`].
pub fn classifying_space(g: &PermGroup, cap: usize) -> Result<FiniteSimplicialSet> {
    let order = g.order()?;
    let table = multiplication_table(g)?;
    monoid_nerve(order, cap, DEFAULT_SIMPLEX_BOUND, |a, b| table[a * order + b])
}

/// Minimal model of a wedge of `r` circles: apart from the base point, an
/// `n`-simplex is `(j, k)` with circle `j` and `1 ≤ k ≤ n`, the image of the
/// sequence `0^k 1^{n+1−k}` in `Δ¹/∂Δ¹`.
pub fn circle_wedge(r: usize, cap: usize) -> FiniteSimplicialSet {
    let counts = (0..=cap).map(|n| 1 + r * n).collect();
    let id = |n: usize, j: usize, k: usize| if k == 0 || k > n { 0 } else { 1 + j * n + (k - 1) };
    let split = |n: usize, x: usize| ((x - 1) / n, (x - 1) % n + 1);
    FiniteSimplicialSet::from_fn(
        counts,
        vec![0; cap + 1],
        move |n, x, i| {
            if x == 0 {
                return 0;
            }
            let (j, k) = split(n, x);
            id(n - 1, j, if i < k { k - 1 } else { k })
        },
        move |n, x, i| {
            if x == 0 {
                return 0;
            }
            let (j, k) = split(n, x);
            id(n + 1, j, if i < k { k + 1 } else { k })
        },
    )
}

/// A pointed simplicial map, tabulated per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    maps: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn from_fn(source: &FiniteSimplicialSet, mut f: impl FnMut(usize, usize) -> usize) -> Self {
        SimplicialMap { maps: (0..=source.cap()).map(|n| (0..source.count(n)).map(|x| f(n, x)).collect()).collect() }
    }

    pub fn identity(x: &FiniteSimplicialSet) -> Self {
        Self::from_fn(x, |_, s| s)
    }

    pub fn to_base(x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> Self {
        Self::from_fn(x, |n, _| y.base(n))
    }

    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.maps[n][x]
    }

    /// `self` first.
    pub fn then(&self, next: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            maps: self.maps.iter().enumerate().map(|(n, m)| m.iter().map(|&x| next.maps[n][x]).collect()).collect(),
        }
    }

    /// Commutes with all faces and degeneracies and preserves base points.
    pub fn verify(&self, x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> Result<()> {
        let cap = x.cap().min(y.cap());
        for n in 0..=cap {
            if self.apply(n, x.base(n)) != y.base(n) {
                return Err(Error::PreconditionFailed(format!("map moves the base point in dim {n}")));
            }
            for s in 0..x.count(n) {
                let fs = self.apply(n, s);
                if n > 0 && (0..=n).any(|i| self.apply(n - 1, x.face(n, s, i)) != y.face(n, fs, i)) {
                    return Err(Error::PreconditionFailed(format!("map does not commute with faces in dim {n}")));
                }
                if n < cap && (0..=n).any(|i| self.apply(n + 1, x.degeneracy(n, s, i)) != y.degeneracy(n, fs, i)) {
                    return Err(Error::PreconditionFailed(format!("map does not commute with degeneracies in dim {n}")));
                }
            }
        }
        Ok(())
    }
}

/// `B h` on tuples.
pub fn nerve_map(h: &GroupHom, source: &FiniteSimplicialSet) -> Result<SimplicialMap> {
    let (m, k) = (h.source().order()?, h.target().order()?);
    Ok(SimplicialMap::from_fn(source, |n, x| {
        let t: Vec<usize> = digits(x, m, n).into_iter().map(|e| h.apply_index(e)).collect();
        undigits(&t, k)
    }))
}

/// A functor from a free category to pointed simplicial sets.
#[derive(Clone, Debug)]
pub struct SimplicialDiagram {
    base: FreeCategory,
    objects: Vec<FiniteSimplicialSet>,
    arrows: Vec<SimplicialMap>,
}

impl SimplicialDiagram {
    pub fn new(base: FreeCategory, objects: Vec<FiniteSimplicialSet>, arrows: Vec<SimplicialMap>) -> Result<Self> {
        let g = base.graph();
        if objects.len() != g.vertices.len() || arrows.len() != g.arrows.len() {
            return Err(Error::Input("simplicial diagram does not match its base graph".into()));
        }
        for (a, f) in arrows.iter().enumerate() {
            f.verify(&objects[g.src(a)], &objects[g.dst(a)])?;
        }
        Ok(SimplicialDiagram { base, objects, arrows })
    }

    /// Constant at `y`, all arrows identities.
    pub fn constant(base: FreeCategory, y: &FiniteSimplicialSet) -> Self {
        let objects = vec![y.clone(); base.num_objects()];
        let arrows = vec![SimplicialMap::identity(y); base.graph().arrows.len()];
        SimplicialDiagram { base, objects, arrows }
    }

    /// `B ∘ 𝒢` truncated at `cap`. Free groups use the circle-wedge model;
    /// maps between free groups must send each generator to a generator or
    /// to the identity.
    pub fn classifying(d: &GroupDiagram, cap: usize) -> Result<Self> {
        let base = d.base().clone();
        let objects = d
            .objects()
            .iter()
            .map(|o| match o {
                GroupObject::Perm(g) => classifying_space(g, cap),
                GroupObject::Symbolic(s) => match (s, o.free_rank()) {
                    (_, Some(r)) => Ok(circle_wedge(r, cap)),
                    (SymbolicGroup::Cyclic(m), None) => classifying_space(&PermGroup::cyclic(*m as usize), cap),
                    _ => Ok(point(cap)),
                },
            })
            .collect::<Result<Vec<_>>>()?;
        let g = base.graph();
        let mut arrows = Vec::new();
        for a in 0..g.arrows.len() {
            let (sx, tx) = (&objects[g.src(a)], &objects[g.dst(a)]);
            let f = match d.arrow(a) {
                ArrowMap::Trivial => SimplicialMap::to_base(sx, tx),
                ArrowMap::Perm(h) => nerve_map(h, sx)?,
                ArrowMap::FreeToPerm { rank, target, images } => {
                    let (e, order) = (target.elements()?, target.order()?);
                    let idx: Vec<usize> = images.iter().map(|p| e.index_of(p).expect("validated")).collect();
                    SimplicialMap::from_fn(sx, |n, x| {
                        if x == 0 {
                            return 0;
                        }
                        let (j, k) = ((x - 1) / n, (x - 1) % n + 1);
                        debug_assert!(j < *rank);
                        let mut t = vec![0; n];
                        t[k - 1] = idx[j];
                        undigits(&t, order)
                    })
                }
                ArrowMap::FreeToFree { words, .. } => {
                    let target_circle = words
                        .iter()
                        .map(|w| match w.as_slice() {
                            [] => Ok(None),
                            [l] if *l > 0 => Ok(Some((*l - 1) as usize)),
                            _ => Err(Error::Unsupported(format!(
                                "arrow `{}` is not a letter map; the circle model only handles generators sent to generators or 1",
                                d.arrow_name(a)
                            ))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    SimplicialMap::from_fn(sx, |n, x| {
                        if x == 0 {
                            return 0;
                        }
                        let (j, k) = ((x - 1) / n, (x - 1) % n + 1);
                        target_circle[j].map_or(0, |m| 1 + m * n + (k - 1))
                    })
                }
            };
            arrows.push(f);
        }
        SimplicialDiagram::new(base, objects, arrows)
    }

    pub fn base(&self) -> &FreeCategory {
        &self.base
    }

    pub fn object(&self, v: usize) -> &FiniteSimplicialSet {
        &self.objects[v]
    }

    fn morphism_map(&self, m: MorId) -> SimplicialMap {
        let mor = self.base.morphism(m);
        let mut f = SimplicialMap::identity(&self.objects[mor.src]);
        for &a in &mor.word {
            f = f.then(&self.arrows[a]);
        }
        f
    }
}

/// The diagonal of the levelwise wedge: `n`-simplices are pairs (chain
/// `c₀ → … → c_n`, `n`-simplex of `F(c₀)`) with all base simplices
/// identified. `d₀` pushes along `F` of the first arrow.
pub fn hocolim_pointed(sd: &SimplicialDiagram, cap: usize) -> Result<FiniteSimplicialSet> {
    let cat = &sd.base;
    if let Some(x) = sd.objects.iter().find(|x| x.cap() < cap) {
        return Err(Error::PreconditionFailed(format!("object truncated at {} below the requested cap {cap}", x.cap())));
    }
    let tables: Vec<ChainTable> = (0..=cap).map(|n| ChainTable::nerve(cat, n)).collect();
    // ids[n][c][x]
    let mut ids: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut counts = Vec::new();
    for (n, t) in tables.iter().enumerate() {
        let mut next = 1;
        let per_chain = t
            .iter()
            .map(|c| {
                let x = &sd.objects[c.first()];
                (0..x.count(n))
                    .map(|s| {
                        if s == x.base(n) {
                            0
                        } else {
                            next += 1;
                            next - 1
                        }
                    })
                    .collect()
            })
            .collect();
        if next > DEFAULT_SIMPLEX_BOUND {
            return Err(Error::bound(format!("hocolim simplices in dimension {n}"), DEFAULT_SIMPLEX_BOUND));
        }
        ids.push(per_chain);
        counts.push(next);
    }
    let mut first_maps: HashMap<MorId, SimplicialMap> = HashMap::new();
    for t in &tables[1..] {
        for c in t.iter() {
            first_maps.entry(c.morphisms[0]).or_insert_with(|| sd.morphism_map(c.morphisms[0]));
        }
    }
    // Inverse of ids: representative (chain, simplex) per id.
    let reps: Vec<Vec<(usize, usize)>> = ids
        .iter()
        .map(|per_chain| {
            let total = per_chain.iter().flatten().max().map_or(1, |m| m + 1);
            let mut r = vec![(0, sd.objects[tables[0].get(0).first()].base(0)); total];
            for (c, xs) in per_chain.iter().enumerate() {
                for (s, &id) in xs.iter().enumerate() {
                    if id != 0 {
                        r[id] = (c, s);
                    }
                }
            }
            r
        })
        .collect();
    let lookup = |n: usize, c: &crate::shapes::Chain, s: usize| ids[n][tables[n].position(c).expect("nerve chain")][s];
    Ok(FiniteSimplicialSet::from_fn(
        counts,
        vec![0; cap + 1],
        |n, id, i| {
            if id == 0 {
                return 0;
            }
            let (ci, s) = reps[n][id];
            let c = tables[n].get(ci);
            let x = &sd.objects[c.first()];
            let fc = cat.face(c, i);
            let fs = if i == 0 { first_maps[&c.morphisms[0]].apply(n - 1, x.face(n, s, 0)) } else { x.face(n, s, i) };
            lookup(n - 1, &fc, fs)
        },
        |n, id, i| {
            if id == 0 {
                return 0;
            }
            let (ci, s) = reps[n][id];
            let c = tables[n].get(ci);
            let x = &sd.objects[c.first()];
            lookup(n + 1, &cat.degeneracy(c, i), x.degeneracy(n, s, i))
        },
    ))
}

/// Nerve of a small category, pointed at the first object.
pub fn category_nerve(cat: &FreeCategory, cap: usize) -> FiniteSimplicialSet {
    let tables: Vec<ChainTable> = (0..=cap).map(|n| ChainTable::nerve(cat, n)).collect();
    let mut base = vec![tables[0].position(&crate::shapes::Chain { objects: vec![0], morphisms: vec![] }).expect("object 0")];
    for n in 0..cap {
        let c = cat.degeneracy(tables[n].get(base[n]), 0);
        base.push(tables[n + 1].position(&c).expect("nerve chain"));
    }
    FiniteSimplicialSet::from_fn(
        tables.iter().map(ChainTable::len).collect(),
        base,
        |n, x, i| tables[n - 1].position(&cat.face(tables[n].get(x), i)).expect("nerve chain"),
        |n, x, i| tables[n + 1].position(&cat.degeneracy(tables[n].get(x), i)).expect("nerve chain"),
    )
}

/// Levelwise product, pointed at the pair of base points.
pub fn product(x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> FiniteSimplicialSet {
    let cap = x.cap().min(y.cap());
    let w = |n: usize| y.count(n);
    FiniteSimplicialSet::from_fn(
        (0..=cap).map(|n| x.count(n) * y.count(n)).collect(),
        (0..=cap).map(|n| x.base(n) * w(n) + y.base(n)).collect(),
        |n, p, i| {
            let (a, b) = (p / w(n), p % w(n));
            x.face(n, a, i) * w(n - 1) + y.face(n, b, i)
        },
        |n, p, i| {
            let (a, b) = (p / w(n), p % w(n));
            x.degeneracy(n, a, i) * w(n + 1) + y.degeneracy(n, b, i)
        },
    )
}

/// `X / A` for a subcomplex `A` (closed under faces and degeneracies), with
/// `A` collapsed to the base point.
pub fn collapse(x: &FiniteSimplicialSet, in_sub: impl Fn(usize, usize) -> bool) -> Result<FiniteSimplicialSet> {
    let cap = x.cap();
    let mut ids = Vec::new();
    let mut reps = Vec::new();
    for n in 0..=cap {
        let mut id = vec![0; x.count(n)];
        let mut rep = vec![usize::MAX];
        for s in 0..x.count(n) {
            if !in_sub(n, s) {
                id[s] = rep.len();
                rep.push(s);
            }
        }
        ids.push(id);
        reps.push(rep);
    }
    for n in 0..=cap {
        for s in (0..x.count(n)).filter(|&s| in_sub(n, s)) {
            let closed = (n == 0 || (0..=n).all(|i| in_sub(n - 1, x.face(n, s, i))))
                && (n == cap || (0..=n).all(|i| in_sub(n + 1, x.degeneracy(n, s, i))));
            if !closed {
                return Err(Error::PreconditionFailed("collapsed set is not a subcomplex".into()));
            }
        }
    }
    Ok(FiniteSimplicialSet::from_fn(
        reps.iter().map(Vec::len).collect(),
        vec![0; cap + 1],
        |n, p, i| if p == 0 { 0 } else { ids[n - 1][x.face(n, reps[n][p], i)] },
        |n, p, i| if p == 0 { 0 } else { ids[n + 1][x.degeneracy(n, reps[n][p], i)] },
    ))
}

/// `(B𝒞 × Y) / (B𝒞 × ⋆)`.
pub fn constant_hocolim(cat: &FreeCategory, y: &FiniteSimplicialSet, cap: usize) -> Result<FiniteSimplicialSet> {
    let p = product(&category_nerve(cat, cap), y);
    let w: Vec<usize> = (0..=cap).map(|n| y.count(n)).collect();
    collapse(&p, |n, s| s % w[n] == y.base(n))
}

/// Finite level of a simplicial abelian group with elements indexed by
/// mixed-radix normal coordinates.
struct Level {
    group: FpAbelianGroup,
    moduli: Vec<usize>,
    order: usize,
}

impl Level {
    fn new(group: &FpAbelianGroup) -> Result<Self> {
        if !group.is_finite() {
            return Err(Error::Unsupported("diagonal nerve of an infinite level".into()));
        }
        let moduli: Vec<usize> = group.torsion().iter().map(|d| d.to_usize().expect("small")).collect();
        let order = moduli.iter().product();
        Ok(Level { group: group.clone(), moduli, order })
    }

    fn vector(&self, e: usize) -> Vec<BigInt> {
        let c: Vec<BigInt> = digits_mixed(e, &self.moduli).into_iter().map(BigInt::from).collect();
        self.group.from_normal_coords(&c)
    }

    fn index(&self, v: &[BigInt]) -> usize {
        let c = self.group.normal_coords(v);
        c.iter().zip(&self.moduli).fold(0, |acc, (x, &m)| acc * m + x.to_usize().expect("reduced"))
    }
}

fn digits_mixed(mut x: usize, moduli: &[usize]) -> Vec<usize> {
    let mut out = vec![0; moduli.len()];
    for (slot, &m) in out.iter_mut().zip(moduli).rev() {
        *slot = x % m;
        x /= m;
    }
    out
}

/// Diagonal of the bisimplicial set `(p, q) ↦ (G_q)^p`: an `n`-simplex is an
/// `n`-tuple in `G_n`.
pub fn diag_nerve(g: &SimplicialAbelianGroup, cap: usize) -> Result<FiniteSimplicialSet> {
    if cap > g.top() {
        return Err(Error::PreconditionFailed(format!("simplicial group only has levels through {}", g.top())));
    }
    let levels = (0..=cap).map(|n| Level::new(g.level(n))).collect::<Result<Vec<_>>>()?;
    let counts = (0..=cap)
        .map(|n| checked_count(levels[n].order, n, DEFAULT_SIMPLEX_BOUND))
        .collect::<Result<Vec<_>>>()?;
    let vectors: Vec<Vec<Vec<BigInt>>> = levels.iter().map(|l| (0..l.order).map(|e| l.vector(e)).collect()).collect();
    // Precomputed element tables: faces, degeneracies and addition per level.
    let face_tab: Vec<Vec<Vec<usize>>> = (0..=cap)
        .map(|n| {
            if n == 0 {
                return vec![];
            }
            (0..=n)
                .map(|i| vectors[n].iter().map(|v| levels[n - 1].index(&g.face(n, i).apply(v))).collect())
                .collect()
        })
        .collect();
    let degen_tab: Vec<Vec<Vec<usize>>> = (0..cap)
        .map(|n| {
            (0..=n)
                .map(|i| vectors[n].iter().map(|v| levels[n + 1].index(&g.degeneracy(n, i).apply(v))).collect())
                .collect()
        })
        .collect();
    let add_tab: Vec<Vec<usize>> = levels
        .iter()
        .zip(&vectors)
        .map(|(l, vs)| {
            let mut t = Vec::with_capacity(l.order * l.order);
            for a in vs {
                for b in vs {
                    let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    t.push(l.index(&s));
                }
            }
            t
        })
        .collect();
    let zero: Vec<usize> = levels.iter().map(|l| l.index(&vec![BigInt::from(0); l.group.num_generators()])).collect();
    let base = (0..=cap).map(|n| undigits(&vec![zero[n]; n], levels[n].order)).collect();
    Ok(FiniteSimplicialSet::from_fn(
        counts,
        base,
        |n, x, i| {
            let (o, o1) = (levels[n].order, levels[n - 1].order);
            let mut t = digits(x, o, n);
            if i == 0 {
                t.remove(0);
            } else if i == n {
                t.pop();
            } else {
                let s = add_tab[n][t[i - 1] * o + t[i]];
                t.splice(i - 1..=i, [s]);
            }
            let t: Vec<usize> = t.into_iter().map(|e| face_tab[n][i][e]).collect();
            undigits(&t, o1)
        },
        |n, x, i| {
            let mut t = digits(x, levels[n].order, n);
            t.insert(i, zero[n]);
            let t: Vec<usize> = t.into_iter().map(|e| degen_tab[n][i][e]).collect();
            undigits(&t, levels[n + 1].order)
        },
    ))
}

/// `H̃_k(X)`, `k ≤ cap − 1`.
pub fn reduced_homology(x: &FiniteSimplicialSet, k: usize) -> Result<FpAbelianGroup> {
    x.reduced_homology(k)
}
