//! Finite graphs, the free categories (and posets) they generate, and the
//! chains of composable morphisms that index every nerve and replacement.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ObjId = usize;
pub type MorId = usize;
pub type ArrowId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub src: String,
    pub dst: String,
}

/// A finite directed multigraph with named vertices and arrows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Graph {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let g = Graph { vertices, arrows };
        g.validate()?;
        Ok(g)
    }

    /// Convenience constructor from string slices.
    pub fn from_edges(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        Self::new(
            vertices.iter().map(|v| v.to_string()).collect(),
            arrows
                .iter()
                .map(|(n, s, t)| Arrow {
                    name: n.to_string(),
                    src: s.to_string(),
                    dst: t.to_string(),
                })
                .collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashMap::new();
        for v in &self.vertices {
            if seen.insert(v.as_str(), ()).is_some() {
                return Err(Error::Input(format!("duplicate vertex `{v}`")));
            }
        }
        let mut names = HashMap::new();
        for a in &self.arrows {
            if names.insert(a.name.as_str(), ()).is_some() {
                return Err(Error::Input(format!("duplicate arrow `{}`", a.name)));
            }
            for end in [&a.src, &a.dst] {
                if !seen.contains_key(end.as_str()) {
                    return Err(Error::Input(format!(
                        "arrow `{}` references undefined vertex `{end}`",
                        a.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn vertex_index(&self, name: &str) -> Option<ObjId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn src(&self, a: ArrowId) -> ObjId {
        self.vertex_index(&self.arrows[a].src).expect("validated")
    }

    pub fn dst(&self, a: ArrowId) -> ObjId {
        self.vertex_index(&self.arrows[a].dst).expect("validated")
    }

    /// A topological order of the vertices, or the name of a vertex on a cycle.
    fn topological_order(&self) -> std::result::Result<Vec<ObjId>, String> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in 0..self.arrows.len() {
            indeg[self.dst(a)] += 1;
        }
        let mut ready: Vec<ObjId> = (0..n).filter(|&v| indeg[v] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in 0..self.arrows.len() {
                if self.src(a) == v {
                    let t = self.dst(a);
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            let v = (0..n).find(|&v| indeg[v] > 0).expect("some vertex remains");
            Err(self.vertices[v].clone())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum CategoryKind {
    /// All paths are distinct morphisms.
    #[default]
    Free,
    /// Paths with equal endpoints are identified.
    Poset,
}

/// A morphism: a directed path, identities being empty paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub src: ObjId,
    pub dst: ObjId,
    /// Arrow ids in order of traversal.
    pub word: Vec<ArrowId>,
}

impl Morphism {
    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

/// The category generated by a finite acyclic graph: freely, or as the poset
/// of reachability when `kind` is [`CategoryKind::Poset`].
#[derive(Clone, Debug)]
pub struct FreeCategory {
    graph: Graph,
    kind: CategoryKind,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    hom: HashMap<(ObjId, ObjId), Vec<MorId>>,
    lookup: HashMap<(ObjId, Vec<ArrowId>), MorId>,
    /// Paths that the poset identifies with a canonical morphism.
    identified: Vec<(Vec<ArrowId>, MorId)>,
}

impl FreeCategory {
    pub fn new(graph: Graph) -> Result<Self> {
        Self::with_kind(graph, CategoryKind::Free)
    }

    pub fn poset(graph: Graph) -> Result<Self> {
        Self::with_kind(graph, CategoryKind::Poset)
    }

    pub fn with_kind(graph: Graph, kind: CategoryKind) -> Result<Self> {
        graph.validate()?;
        graph.topological_order().map_err(Error::CyclicGraph)?;
        let n = graph.vertices.len();
        let mut paths: Vec<Morphism> = Vec::new();
        for v in 0..n {
            let mut stack = vec![Morphism {
                src: v,
                dst: v,
                word: vec![],
            }];
            while let Some(p) = stack.pop() {
                for a in (0..graph.arrows.len()).rev() {
                    if graph.src(a) == p.dst {
                        let mut word = p.word.clone();
                        word.push(a);
                        stack.push(Morphism {
                            src: v,
                            dst: graph.dst(a),
                            word,
                        });
                    }
                }
                paths.push(p);
            }
        }
        paths.sort_by(|a, b| {
            (a.src, a.word.len() > 0, a.dst, &a.word).cmp(&(b.src, b.word.len() > 0, b.dst, &b.word))
        });
        let mut morphisms = Vec::new();
        let mut identities = vec![0; n];
        let mut hom: HashMap<(ObjId, ObjId), Vec<MorId>> = HashMap::new();
        let mut lookup = HashMap::new();
        let mut identified = Vec::new();
        for p in paths {
            if kind == CategoryKind::Poset {
                if let Some(&canon) = hom.get(&(p.src, p.dst)).and_then(|v| v.first()) {
                    lookup.insert((p.src, p.word.clone()), canon);
                    identified.push((p.word, canon));
                    continue;
                }
            }
            let id = morphisms.len();
            if p.is_identity() {
                identities[p.src] = id;
            }
            hom.entry((p.src, p.dst)).or_default().push(id);
            lookup.insert((p.src, p.word.clone()), id);
            morphisms.push(p);
        }
        Ok(FreeCategory {
            graph,
            kind,
            morphisms,
            identities,
            hom,
            lookup,
            identified,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn kind(&self) -> CategoryKind {
        self.kind
    }

    pub fn num_objects(&self) -> usize {
        self.graph.vertices.len()
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.graph.vertices[o]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.morphisms[m].is_identity()
    }

    /// Morphisms `a → b`.
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        self.hom.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    /// Morphisms with the given target.
    pub fn into(&self, b: ObjId) -> Vec<MorId> {
        (0..self.morphisms.len())
            .filter(|&m| self.morphisms[m].dst == b)
            .collect()
    }

    /// The morphism given by a single generating arrow.
    pub fn arrow(&self, a: ArrowId) -> MorId {
        self.lookup[&(self.graph.src(a), vec![a])]
    }

    /// `g ∘ f` (first `f`, then `g`).
    pub fn compose(&self, f: MorId, g: MorId) -> MorId {
        let (mf, mg) = (&self.morphisms[f], &self.morphisms[g]);
        assert_eq!(mf.dst, mg.src, "morphisms are not composable");
        let mut word = mf.word.clone();
        word.extend(&mg.word);
        self.lookup[&(mf.src, word)]
    }

    /// Distinct paths the poset structure identifies: `(path, canonical morphism)`.
    pub fn identified_paths(&self) -> &[(Vec<ArrowId>, MorId)] {
        &self.identified
    }

    pub fn morphism_label(&self, m: MorId) -> String {
        let mm = &self.morphisms[m];
        if mm.is_identity() {
            format!("id_{}", self.graph.vertices[mm.src])
        } else {
            mm.word
                .iter()
                .map(|&a| self.graph.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    fn chain_key(&self, c: &Chain) -> (Vec<&str>, Vec<Vec<&str>>) {
        (
            c.objects.iter().map(|&o| self.object_name(o)).collect(),
            c.morphisms
                .iter()
                .map(|&m| {
                    self.morphisms[m]
                        .word
                        .iter()
                        .map(|&a| self.graph.arrows[a].name.as_str())
                        .collect()
                })
                .collect(),
        )
    }

    fn sort_chains(&self, chains: &mut [Chain]) {
        chains.sort_by(|a, b| self.chain_key(a).cmp(&self.chain_key(b)));
    }

    fn chains(&self, n: usize, nondegenerate: bool) -> Vec<Chain> {
        let mut out: Vec<Chain> = (0..self.num_objects())
            .map(|o| Chain {
                objects: vec![o],
                morphisms: vec![],
            })
            .collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for c in &out {
                let last = *c.objects.last().expect("nonempty");
                for (m, mm) in self.morphisms.iter().enumerate() {
                    if mm.src != last || (nondegenerate && mm.is_identity()) {
                        continue;
                    }
                    let mut c2 = c.clone();
                    c2.objects.push(mm.dst);
                    c2.morphisms.push(m);
                    next.push(c2);
                }
            }
            out = next;
        }
        self.sort_chains(&mut out);
        out
    }

    /// All functors `[n] → C` (simplices of the nerve), canonically ordered.
    pub fn nerve_chains(&self, n: usize) -> Vec<Chain> {
        self.chains(n, false)
    }

    /// Chains of length `n` without identity morphisms.
    pub fn nondegenerate_chains(&self, n: usize) -> Vec<Chain> {
        self.chains(n, true)
    }

    /// Face `dᵢ`: drop `c₀` (i = 0), drop `c_n` (i = n), or compose around `cᵢ`.
    pub fn face(&self, c: &Chain, i: usize) -> Chain {
        let n = c.dim();
        assert!(n >= 1 && i <= n, "face index out of range");
        let mut objects = c.objects.clone();
        let mut morphisms = c.morphisms.clone();
        objects.remove(i);
        if i == 0 {
            morphisms.remove(0);
        } else if i == n {
            morphisms.pop();
        } else {
            let composite = self.compose(morphisms[i - 1], morphisms[i]);
            morphisms.splice(i - 1..=i, [composite]);
        }
        Chain { objects, morphisms }
    }

    /// Degeneracy `sᵢ`: repeat `cᵢ` with an identity in between.
    pub fn degeneracy(&self, c: &Chain, i: usize) -> Chain {
        assert!(i <= c.dim(), "degeneracy index out of range");
        let mut objects = c.objects.clone();
        let mut morphisms = c.morphisms.clone();
        objects.insert(i, c.objects[i]);
        morphisms.insert(i, self.identity(c.objects[i]));
        Chain { objects, morphisms }
    }
}

/// `c₀ → c₁ → … → c_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

impl Chain {
    pub fn dim(&self) -> usize {
        self.morphisms.len()
    }

    pub fn first(&self) -> ObjId {
        self.objects[0]
    }

    pub fn last(&self) -> ObjId {
        *self.objects.last().expect("chains are nonempty")
    }

    pub fn is_degenerate(&self, cat: &FreeCategory) -> bool {
        self.morphisms.iter().any(|&m| cat.is_identity(m))
    }

    pub fn label(&self, cat: &FreeCategory) -> String {
        let mut s = cat.object_name(self.objects[0]).to_string();
        for (k, &m) in self.morphisms.iter().enumerate() {
            s.push_str(&format!(" -{}-> {}", cat.morphism_label(m), cat.object_name(self.objects[k + 1])));
        }
        s
    }
}

/// Chains of one dimension with an index for reverse lookup.
#[derive(Clone, Debug)]
pub struct ChainTable {
    chains: Vec<Chain>,
    index: HashMap<Chain, usize>,
}

impl ChainTable {
    pub fn new(chains: Vec<Chain>) -> Self {
        let index = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        ChainTable { chains, index }
    }

    pub fn nerve(cat: &FreeCategory, n: usize) -> Self {
        Self::new(cat.nerve_chains(n))
    }

    pub fn nondegenerate(cat: &FreeCategory, n: usize) -> Self {
        Self::new(cat.nondegenerate_chains(n))
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn get(&self, i: usize) -> &Chain {
        &self.chains[i]
    }

    pub fn position(&self, c: &Chain) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Chain> {
        self.chains.iter()
    }
}

/// Builds the free category of a graph.
pub fn build_free_category(graph: Graph) -> Result<FreeCategory> {
    FreeCategory::new(graph)
}
