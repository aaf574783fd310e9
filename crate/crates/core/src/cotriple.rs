//! The cotriple resolution of an abelian diagram, its comparison with the
//! simplicial replacement, and Moore-complex homotopy of simplicial abelian
//! groups.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::abelian::{preimage, Lattice, Matrix, Subquotient};
use crate::diagramhomology::{arrow_boundary, full_replacement, place, ReplacementComplex};
use crate::diagrams::AbelianDiagram;
use crate::error::{Error, Result};
use crate::shapes::{ChainTable, FreeCategory, MorId, ObjId};
use crate::simplicial::SimplicialAbelianGroup;
use crate::{AbHom, FpAbelianGroup};

/// `(α₀, α₁, …, α_n)` with `α₀ : c₀ → c` and `α_{k+1} : c_{k+1} → c_k`.
type Tuple = Vec<MorId>;

#[derive(Clone, Debug)]
struct LevelIndex {
    tuples: Vec<Tuple>,
    offsets: Vec<usize>,
    lookup: HashMap<Tuple, usize>,
    total: usize,
}

impl LevelIndex {
    fn new(a: &AbelianDiagram, tuples: Vec<Tuple>) -> Self {
        let cat = a.base();
        let mut offsets = Vec::with_capacity(tuples.len());
        let mut total = 0;
        for t in &tuples {
            offsets.push(total);
            total += a.object(cat.morphism(*t.last().expect("nonempty")).src).num_generators();
        }
        let lookup = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        LevelIndex { tuples, offsets, lookup, total }
    }

    fn at(&self, t: &Tuple) -> usize {
        self.offsets[self.lookup[t]]
    }
}

fn tuples_into(cat: &FreeCategory, c: ObjId, len: usize) -> Vec<Tuple> {
    let mut out: Vec<Tuple> = cat.into(c).into_iter().map(|m| vec![m]).collect();
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                let src = cat.morphism(*t.last().expect("nonempty")).src;
                cat.into(src).into_iter().map(move |m| {
                    let mut u = t.clone();
                    u.push(m);
                    u
                })
            })
            .collect();
    }
    out
}

/// `T^{n+1}𝒜` for `n ≤ top`, where `(T𝒜)(c) = ⊕_{c₀ → c} 𝒜(c₀)`.
#[derive(Clone, Debug)]
pub struct CotripleResolution {
    diagram: AbelianDiagram,
    /// `index[c][n]`
    index: Vec<Vec<LevelIndex>>,
    /// The simplicial abelian group `n ↦ (T^{n+1}𝒜)(c)` for each object.
    objects: Vec<SimplicialAbelianGroup>,
}

impl CotripleResolution {
    pub fn new(a: &AbelianDiagram, top: usize) -> Result<Self> {
        let cat = a.base();
        let maps: Vec<AbHom> = (0..cat.morphisms().len()).map(|m| a.morphism_map(m)).collect();
        let mut index = Vec::new();
        let mut objects = Vec::new();
        for c in 0..cat.num_objects() {
            let idx: Vec<LevelIndex> = (0..=top).map(|n| LevelIndex::new(a, tuples_into(cat, c, n + 1))).collect();
            let levels: Vec<FpAbelianGroup> = idx
                .iter()
                .map(|l| {
                    let parts: Vec<FpAbelianGroup> =
                        l.tuples.iter().map(|t| a.object(cat.morphism(*t.last().unwrap()).src).clone()).collect();
                    FpAbelianGroup::direct_sum(&parts)
                })
                .collect();
            let mut faces = vec![vec![]];
            for n in 1..=top {
                let fs = (0..=n)
                    .map(|i| {
                        let mut m = Matrix::zeros(idx[n - 1].total, idx[n].total);
                        for (k, t) in idx[n].tuples.iter().enumerate() {
                            let src = cat.morphism(t[n]).src;
                            let (u, block) = if i < n {
                                let mut u = t.clone();
                                let composite = cat.compose(t[i + 1], t[i]);
                                u.splice(i..=i + 1, [composite]);
                                (u, Matrix::identity(a.object(src).num_generators()))
                            } else {
                                (t[..n].to_vec(), maps[t[n]].matrix().clone())
                            };
                            place(&mut m, idx[n - 1].at(&u), idx[n].offsets[k], &block, 1);
                        }
                        AbHom::new(levels[n].clone(), levels[n - 1].clone(), m)
                    })
                    .collect::<Result<Vec<_>>>()?;
                faces.push(fs);
            }
            let mut degeneracies = Vec::new();
            for n in 0..=top {
                if n == top {
                    degeneracies.push(vec![]);
                    continue;
                }
                let ss = (0..=n)
                    .map(|i| {
                        let mut m = Matrix::zeros(idx[n + 1].total, idx[n].total);
                        for (k, t) in idx[n].tuples.iter().enumerate() {
                            let mut u = t.clone();
                            u.insert(i + 1, cat.identity(cat.morphism(t[i]).src));
                            let g = a.object(cat.morphism(t[n]).src).num_generators();
                            place(&mut m, idx[n + 1].at(&u), idx[n].offsets[k], &Matrix::identity(g), 1);
                        }
                        AbHom::new(levels[n].clone(), levels[n + 1].clone(), m)
                    })
                    .collect::<Result<Vec<_>>>()?;
                degeneracies.push(ss);
            }
            objects.push(SimplicialAbelianGroup::new(levels, faces, degeneracies)?);
            index.push(idx);
        }
        Ok(CotripleResolution { diagram: a.clone(), index, objects })
    }

    pub fn top(&self) -> usize {
        self.objects[0].top()
    }

    pub fn at(&self, c: ObjId) -> &SimplicialAbelianGroup {
        &self.objects[c]
    }

    pub fn num_tuples(&self, c: ObjId, n: usize) -> usize {
        self.index[c][n].tuples.len()
    }

    /// Simplicial identities at every object.
    pub fn check_identities(&self) -> Result<()> {
        self.objects.iter().try_for_each(SimplicialAbelianGroup::check_identities)
    }

    /// `ε : (T𝒜)(c) → 𝒜(c)`.
    pub fn augmentation(&self, c: ObjId) -> Result<AbHom> {
        let a = &self.diagram;
        let l = &self.index[c][0];
        let mut m = Matrix::zeros(a.object(c).num_generators(), l.total);
        for (k, t) in l.tuples.iter().enumerate() {
            place(&mut m, 0, l.offsets[k], a.morphism_map(t[0]).matrix(), 1);
        }
        AbHom::new(self.objects[c].level(0).clone(), a.object(c).clone(), m)
    }

    /// `ε d₀ = ε d₁` on `T²𝒜` at every object.
    pub fn augmentation_coequalizes(&self) -> Result<bool> {
        if self.top() == 0 {
            return Ok(true);
        }
        for (c, s) in self.objects.iter().enumerate() {
            let e = self.augmentation(c)?;
            if !s.face(1, 0).then(&e).same_as(&s.face(1, 1).then(&e)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Level `n` as a diagram: an arrow `γ` sends `(α₀, …)` to `(γα₀, …)`.
    pub fn level_diagram(&self, n: usize) -> Result<AbelianDiagram> {
        let cat = self.diagram.base();
        let g = cat.graph();
        let mut arrows = Vec::new();
        for a in 0..g.arrows.len() {
            let (s, t) = (g.src(a), g.dst(a));
            let (from, to) = (&self.index[s][n], &self.index[t][n]);
            let mut m = Matrix::zeros(to.total, from.total);
            for (k, tup) in from.tuples.iter().enumerate() {
                let mut u = tup.clone();
                u[0] = cat.compose(tup[0], cat.arrow(a));
                let gens = self.diagram.object(cat.morphism(tup[n]).src).num_generators();
                place(&mut m, to.at(&u), from.offsets[k], &Matrix::identity(gens), 1);
            }
            arrows.push(AbHom::new(self.objects[s].level(n).clone(), self.objects[t].level(n).clone(), m)?);
        }
        AbelianDiagram::new(cat.clone(), (0..cat.num_objects()).map(|c| self.objects[c].level(n).clone()).collect(), arrows)
    }

    /// `n ↦ colim T^{n+1}𝒜`, presented on the generators of `⊕_c (T^{n+1}𝒜)(c)`.
    pub fn colimit(&self) -> Result<SimplicialAbelianGroup> {
        let top = self.top();
        let levels = (0..=top)
            .map(|n| Ok(arrow_boundary(&self.level_diagram(n)?)?.cokernel()))
            .collect::<Result<Vec<_>>>()?;
        let stack = |pick: &dyn Fn(&SimplicialAbelianGroup) -> Matrix<BigInt>| {
            let blocks: Vec<Matrix<BigInt>> = self.objects.iter().map(pick).collect();
            Matrix::block_diagonal(&blocks)
        };
        let mut faces = vec![vec![]];
        for n in 1..=top {
            faces.push(
                (0..=n)
                    .map(|i| AbHom::new(levels[n].clone(), levels[n - 1].clone(), stack(&|s| s.face(n, i).matrix().clone())))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let mut degeneracies = Vec::new();
        for n in 0..=top {
            degeneracies.push(if n == top {
                vec![]
            } else {
                (0..=n)
                    .map(|i| {
                        AbHom::new(levels[n].clone(), levels[n + 1].clone(), stack(&|s| s.degeneracy(n, i).matrix().clone()))
                    })
                    .collect::<Result<Vec<_>>>()?
            });
        }
        SimplicialAbelianGroup::new(levels, faces, degeneracies)
    }

    /// `φ_n`: the replacement summand of `c₀ →^{m₁} … →^{m_n} c_n` goes to the
    /// tuple `(id_{c_n}, m_n, …, m₁)` at `c_n`.
    fn comparison(&self, n: usize, replacement: &SimplicialAbelianGroup, colim: &SimplicialAbelianGroup) -> Result<AbHom> {
        let a = &self.diagram;
        let cat = a.base();
        let mut obj_off = vec![0];
        for c in 0..cat.num_objects() {
            obj_off.push(obj_off[c] + self.index[c][n].total);
        }
        let chains = ChainTable::nerve(cat, n);
        let rows = *obj_off.last().unwrap();
        let mut m = Matrix::zeros(rows, replacement.level(n).num_generators());
        let mut col = 0;
        for ch in chains.iter() {
            let last = ch.last();
            let mut t = vec![cat.identity(last)];
            t.extend(ch.morphisms.iter().rev());
            let g = a.object(ch.first()).num_generators();
            place(&mut m, obj_off[last] + self.index[last][n].at(&t), col, &Matrix::identity(g), 1);
            col += g;
        }
        AbHom::new(replacement.level(n).clone(), colim.level(n).clone(), m)
    }
}

#[derive(Clone, Debug)]
pub struct Main1Report {
    pub levels_isomorphic: bool,
    pub faces_commute: bool,
    pub degeneracies_commute: bool,
    /// `(replacement, colim of resolution)` homology per dimension below `top`.
    pub homology: Vec<(FpAbelianGroup, FpAbelianGroup)>,
}

impl Main1Report {
    pub fn holds(&self) -> bool {
        self.levels_isomorphic
            && self.faces_commute
            && self.degeneracies_commute
            && self.homology.iter().all(|(x, y)| x == y)
    }
}

/// Compares `colim T^{•+1}𝒜` with the simplicial replacement through `top`,
/// using `φ` and the reindexing `dᵢ ↔ d_{n−i}`, `sᵢ ↔ s_{n−i}`.
pub fn verify_main1(a: &AbelianDiagram, top: usize) -> Result<Main1Report> {
    let res = CotripleResolution::new(a, top)?;
    let colim = res.colimit()?;
    let repl = full_replacement(a, top)?;
    let phis = (0..=top).map(|n| res.comparison(n, &repl, &colim)).collect::<Result<Vec<_>>>()?;
    let levels_isomorphic = phis.iter().all(AbHom::is_isomorphism);
    let faces_commute = (1..=top).all(|n| {
        (0..=n).all(|i| repl.face(n, i).then(&phis[n - 1]).same_as(&phis[n].then(colim.face(n, n - i))))
    });
    let degeneracies_commute = (0..top).all(|n| {
        (0..=n).all(|i| repl.degeneracy(n, i).then(&phis[n + 1]).same_as(&phis[n].then(colim.degeneracy(n, n - i))))
    });
    let normalized = ReplacementComplex::new(a, top)?;
    let ours = colim.alternating_complex()?;
    let homology = (0..top).map(|n| (normalized.complex().homology_group(n), ours.homology_group(n))).collect();
    Ok(Main1Report { levels_isomorphic, faces_commute, degeneracies_commute, homology })
}

/// Elements killed by every face `d_i` with `i ∈ faces`, as generator columns.
fn killed_by(g: &SimplicialAbelianGroup, n: usize, faces: std::ops::RangeInclusive<usize>) -> Matrix<BigInt> {
    let gens = g.level(n).num_generators();
    if n == 0 || faces.is_empty() {
        return Matrix::identity(gens);
    }
    let below = g.level(n - 1).relations().clone();
    let count = faces.clone().count();
    let stacked = faces.clone().map(|i| g.face(n, i).matrix().clone()).reduce(|x, y| x.vstack(&y)).expect("nonempty");
    preimage(&stacked, &Matrix::block_diagonal(&vec![below; count]))
}

/// The Moore complex `N_n = ∩_{i>0} ker dᵢ` with differential `d₀`, as
/// subquotient data for `π_n`. Needs level `n + 1`.
pub fn moore_homotopy_classes(g: &SimplicialAbelianGroup, n: usize) -> Result<Subquotient<BigInt>> {
    if n + 1 > g.top() {
        return Err(Error::PreconditionFailed(format!("π_{n} needs levels through {}", n + 1)));
    }
    let cycles = killed_by(g, n, 0..=n);
    let cycles = if n == 0 { Matrix::identity(g.level(0).num_generators()) } else { cycles };
    let normalized_above = killed_by(g, n + 1, 1..=n + 1);
    let boundaries = g.face(n + 1, 0).matrix().mul(&normalized_above).hstack(g.level(n).relations());
    Ok(Subquotient::new(&cycles, &boundaries))
}

pub fn moore_homotopy(g: &SimplicialAbelianGroup, n: usize) -> Result<FpAbelianGroup> {
    Ok(moore_homotopy_classes(g, n)?.group)
}

/// `π_m = ∩_{0 ≤ i ≤ m} ker dᵢ`, valid when level `m + 1` is generated by
/// degenerate simplices.
pub fn degenerate_generation_formula(g: &SimplicialAbelianGroup, m: usize) -> Result<FpAbelianGroup> {
    if m + 1 > g.top() {
        return Err(Error::PreconditionFailed(format!("needs level {}", m + 1)));
    }
    let degenerate = (0..=m)
        .map(|i| g.degeneracy(m, i).matrix().clone())
        .fold(g.level(m + 1).relations().clone(), |acc, s| acc.hstack(&s));
    let gens = g.level(m + 1).num_generators();
    if !Lattice::spanned_by(&degenerate).contains_all(&Matrix::identity(gens)) {
        return Err(Error::PreconditionFailed(format!("level {} is not generated by degenerate simplices", m + 1)));
    }
    let kernel = killed_by(g, m, 0..=m);
    Ok(Subquotient::new(&kernel, g.level(m).relations()).group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagramhomology::{colim_n, flow_subgroup};
    use crate::shapes::Graph;

    fn z(n: i64) -> FpAbelianGroup {
        if n == 0 { FpAbelianGroup::free(1) } else { FpAbelianGroup::cyclic(n.into()) }
    }

    fn pararrows() -> FreeCategory {
        FreeCategory::new(Graph::from_edges(&["a", "b"], &[("u0", "a", "b"), ("u1", "a", "b")]).unwrap()).unwrap()
    }

    fn sample() -> AbelianDiagram {
        // ℤ ⇉ ℤ/4 by 1 and 2
        let (s, t) = (z(0), z(4));
        AbelianDiagram::new(
            pararrows(),
            vec![s.clone(), t.clone()],
            vec![
                AbHom::new(s.clone(), t.clone(), Matrix::from_i64_rows(&[vec![1]])).unwrap(),
                AbHom::new(s, t, Matrix::from_i64_rows(&[vec![2]])).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn level_zero_counts_arrows_into_each_object() {
        let r = CotripleResolution::new(&sample(), 3).unwrap();
        assert_eq!(r.num_tuples(1, 0), 3);
        assert_eq!(r.at(1).level(0), &FpAbelianGroup::direct_sum(&[z(0), z(0), z(4)]));
        r.check_identities().unwrap();
        assert!(r.augmentation_coequalizes().unwrap());
    }

    #[test]
    fn one_object_resolution_is_constant() {
        let one = FreeCategory::new(Graph::from_edges(&["x"], &[]).unwrap()).unwrap();
        let a = AbelianDiagram::constant(one, z(6));
        let r = CotripleResolution::new(&a, 3).unwrap();
        assert!((0..=3).all(|n| r.at(0).level(n) == &z(6)));
        let rep = verify_main1(&a, 3).unwrap();
        assert!(rep.holds(), "{rep:?}");
    }

    #[test]
    fn main1_on_parallel_arrows() {
        let a = sample();
        let rep = verify_main1(&a, 3).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.homology[1].0, colim_n(&a, 1).unwrap());
    }

    #[test]
    fn main1_on_a_path() {
        let cat = FreeCategory::new(Graph::from_edges(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]).unwrap()).unwrap();
        let (x, y, w) = (z(2), z(0), z(3));
        let a = AbelianDiagram::new(
            cat,
            vec![x.clone(), y.clone(), w.clone()],
            vec![AbHom::zero(&x, &y), AbHom::new(y, w, Matrix::from_i64_rows(&[vec![1]])).unwrap()],
        )
        .unwrap();
        assert!(verify_main1(&a, 3).unwrap().holds());
    }

    #[test]
    fn moore_agrees_with_alternating_and_degenerate_formula() {
        let a = sample();
        let s = full_replacement(&a, 3).unwrap();
        let alt = s.alternating_complex().unwrap();
        for n in 0..3 {
            assert_eq!(moore_homotopy(&s, n).unwrap(), alt.homology_group(n));
        }
        assert_eq!(degenerate_generation_formula(&s, 1).unwrap(), flow_subgroup(&a).unwrap());
        let c = SimplicialAbelianGroup::constant(&z(5), 3);
        assert_eq!(moore_homotopy(&c, 0).unwrap(), z(5));
        assert!(moore_homotopy(&c, 1).unwrap().is_trivial());
        assert!(degenerate_generation_formula(&c, 1).unwrap().is_trivial());
    }

    #[test]
    fn degenerate_formula_checks_its_hypothesis() {
        let cat = FreeCategory::new(Graph::from_edges(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]).unwrap()).unwrap();
        let a = AbelianDiagram::constant(cat, z(2));
        let s = full_replacement(&a, 3).unwrap();
        assert!(matches!(degenerate_generation_formula(&s, 1), Err(Error::PreconditionFailed(_))));
    }
}
