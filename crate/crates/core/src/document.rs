//! JSON input documents describing a diagram.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abelian::Matrix;
use crate::diagrams::{AbelianDiagram, ArrowMap, GroupDiagram, GroupObject, Word};
use crate::error::{Error, Result};
use crate::grouphomology::SymbolicGroup;
use crate::permgroups::{GroupHom, Perm, PermGroup};
use crate::shapes::{FreeCategory, Graph};
use crate::{AbHom, FpAbelianGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Trivial,
    /// Realized as a cyclic permutation group.
    Cyclic { order: usize },
    Symmetric { degree: usize },
    Alternating { degree: usize },
    Perm { degree: usize, generators: Vec<Vec<usize>> },
    Free { rank: usize },
    /// `ℤ^generators / (column span of relations)`; `relations` is given by rows.
    Abelian {
        generators: usize,
        #[serde(default)]
        relations: Vec<Vec<i64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HomSpec {
    Trivial,
    /// Images of the source generators as permutation image arrays.
    Images { images: Vec<Vec<usize>> },
    /// Images of free generators as words (`k + 1` for `x_k`, negative for inverses).
    Words { words: Vec<Word> },
    /// Integer matrix by rows, acting on generator columns.
    Matrix { rows: Vec<Vec<i64>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub graph: Graph,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub poset: bool,
    pub groups: BTreeMap<String, GroupSpec>,
    pub homs: BTreeMap<String, HomSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskSpec>,
}

/// A validated document.
#[derive(Clone, Debug)]
pub enum Diagram {
    Group(GroupDiagram),
    Abelian(AbelianDiagram),
}

impl Diagram {
    pub fn base(&self) -> &FreeCategory {
        match self {
            Diagram::Group(d) => d.base(),
            Diagram::Abelian(d) => d.base(),
        }
    }
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    fn category(&self) -> Result<FreeCategory> {
        let g = &self.graph;
        for a in &g.arrows {
            for end in [&a.src, &a.dst] {
                if g.vertex_index(end).is_none() {
                    return Err(Error::Input(format!("arrow `{}` refers to undefined vertex `{end}`", a.name)));
                }
            }
        }
        for name in self.groups.keys() {
            if g.vertex_index(name).is_none() {
                return Err(Error::Input(format!("group given for undefined vertex `{name}`")));
            }
        }
        for name in self.homs.keys() {
            if g.arrow_index(name).is_none() {
                return Err(Error::Input(format!("hom given for undefined arrow `{name}`")));
            }
        }
        if self.poset {
            FreeCategory::poset(g.clone())
        } else {
            FreeCategory::new(g.clone())
        }
    }

    fn group_spec(&self, v: &str) -> Result<&GroupSpec> {
        self.groups.get(v).ok_or_else(|| Error::Input(format!("no group for vertex `{v}`")))
    }

    fn hom_spec(&self, a: &str) -> Result<&HomSpec> {
        self.homs.get(a).ok_or_else(|| Error::Input(format!("no hom for arrow `{a}`")))
    }

    pub fn is_abelian(&self) -> bool {
        self.groups.values().any(|g| matches!(g, GroupSpec::Abelian { .. }))
            || self.homs.values().any(|h| matches!(h, HomSpec::Matrix { .. }))
    }

    pub fn to_diagram(&self) -> Result<Diagram> {
        if self.is_abelian() {
            Ok(Diagram::Abelian(self.to_abelian_diagram()?))
        } else {
            Ok(Diagram::Group(self.to_group_diagram()?))
        }
    }

    pub fn to_group_diagram(&self) -> Result<GroupDiagram> {
        let cat = self.category()?;
        let g = cat.graph().clone();
        let objects = g.vertices.iter().map(|v| group_object(v, self.group_spec(v)?)).collect::<Result<Vec<_>>>()?;
        let mut arrows = Vec::new();
        for (a, arrow) in g.arrows.iter().enumerate() {
            let (s, t) = (&objects[g.src(a)], &objects[g.dst(a)]);
            let name = &arrow.name;
            let map = match (self.hom_spec(name)?, s, t) {
                (HomSpec::Trivial, _, _) => ArrowMap::Trivial,
                (HomSpec::Images { images }, GroupObject::Perm(sg), GroupObject::Perm(tg)) => {
                    let images = perms(name, images)?;
                    ArrowMap::Perm(GroupHom::named(name.clone(), sg.clone(), tg.clone(), images)?)
                }
                (HomSpec::Images { images }, GroupObject::Symbolic(_), GroupObject::Perm(tg)) => {
                    let rank = s.free_rank().ok_or_else(|| unsupported_source(name))?;
                    let images = perms(name, images)?;
                    if images.len() != rank {
                        return Err(Error::Input(format!("arrow `{name}` needs {rank} generator images")));
                    }
                    for p in &images {
                        if !tg.contains(p)? {
                            return Err(Error::IllDefinedHom {
                                name: name.clone(),
                                detail: format!("image {p} is not in the target"),
                            });
                        }
                    }
                    ArrowMap::FreeToPerm { rank, target: tg.clone(), images }
                }
                (HomSpec::Words { words }, GroupObject::Symbolic(_), GroupObject::Symbolic(_)) => {
                    let source_rank = s.free_rank().ok_or_else(|| unsupported_source(name))?;
                    let target_rank = t.free_rank().ok_or_else(|| unsupported_source(name))?;
                    if words.len() != source_rank
                        || words.iter().flatten().any(|&l| l == 0 || l.unsigned_abs() as usize > target_rank)
                    {
                        return Err(Error::Input(format!("arrow `{name}` has malformed words")));
                    }
                    ArrowMap::FreeToFree { source_rank, target_rank, words: words.clone() }
                }
                _ => return Err(Error::Input(format!("hom for arrow `{name}` does not match its endpoint groups"))),
            };
            arrows.push(map);
        }
        GroupDiagram::new(cat, objects, arrows)
    }

    pub fn to_abelian_diagram(&self) -> Result<AbelianDiagram> {
        let cat = self.category()?;
        let g = cat.graph().clone();
        let objects = g.vertices.iter().map(|v| abelian_object(v, self.group_spec(v)?)).collect::<Result<Vec<_>>>()?;
        let mut arrows = Vec::new();
        for (a, arrow) in g.arrows.iter().enumerate() {
            let (s, t) = (&objects[g.src(a)], &objects[g.dst(a)]);
            let f = match self.hom_spec(&arrow.name)? {
                HomSpec::Trivial => AbHom::zero(s, t),
                HomSpec::Matrix { rows } => {
                    let m = if rows.is_empty() { Matrix::zeros(0, s.num_generators()) } else { Matrix::from_i64_rows(rows) };
                    if m.num_rows() != t.num_generators() || m.num_cols() != s.num_generators() {
                        return Err(Error::Input(format!("matrix for arrow `{}` has the wrong shape", arrow.name)));
                    }
                    AbHom::new(s.clone(), t.clone(), m).map_err(|e| Error::IllDefinedHom {
                        name: arrow.name.clone(),
                        detail: e.to_string(),
                    })?
                }
                _ => return Err(Error::Input(format!("arrow `{}` of an abelian diagram needs a matrix", arrow.name))),
            };
            arrows.push(f);
        }
        AbelianDiagram::new(cat, objects, arrows)
    }
}

fn unsupported_source(name: &str) -> Error {
    Error::Input(format!("arrow `{name}` starts at a group without generators to map"))
}

fn perms(name: &str, images: &[Vec<usize>]) -> Result<Vec<Perm>> {
    images
        .iter()
        .map(|i| Perm::from_images(i.clone()).map_err(|e| Error::Input(format!("arrow `{name}`: {e}"))))
        .collect()
}

fn group_object(v: &str, spec: &GroupSpec) -> Result<GroupObject> {
    Ok(match spec {
        GroupSpec::Trivial => GroupObject::Perm(PermGroup::trivial(1)),
        GroupSpec::Cyclic { order: 0 } => return Err(Error::Input(format!("vertex `{v}`: cyclic order 0"))),
        GroupSpec::Cyclic { order } => GroupObject::Perm(PermGroup::cyclic(*order)),
        GroupSpec::Symmetric { degree } => GroupObject::Perm(PermGroup::symmetric(*degree)),
        GroupSpec::Alternating { degree } => GroupObject::Perm(PermGroup::alternating(*degree)),
        GroupSpec::Perm { degree, generators } => {
            let gens = generators
                .iter()
                .map(|g| {
                    let p = Perm::from_images(g.clone()).map_err(|e| Error::Input(format!("vertex `{v}`: {e}")))?;
                    if p.degree() != *degree {
                        return Err(Error::Input(format!("vertex `{v}`: generator of degree {} given", p.degree())));
                    }
                    Ok(p)
                })
                .collect::<Result<Vec<_>>>()?;
            GroupObject::Perm(PermGroup::new(*degree, gens)?)
        }
        GroupSpec::Free { rank } => GroupObject::Symbolic(SymbolicGroup::Free(*rank)),
        GroupSpec::Abelian { .. } => {
            return Err(Error::Input(format!("vertex `{v}` is abelian; use abelian commands or matrices throughout")))
        }
    })
}

fn abelian_object(v: &str, spec: &GroupSpec) -> Result<FpAbelianGroup> {
    Ok(match spec {
        GroupSpec::Trivial => FpAbelianGroup::trivial(),
        GroupSpec::Cyclic { order: 0 } => return Err(Error::Input(format!("vertex `{v}`: cyclic order 0"))),
        GroupSpec::Cyclic { order } => FpAbelianGroup::cyclic((*order).into()),
        GroupSpec::Free { rank } => FpAbelianGroup::free(*rank),
        GroupSpec::Abelian { generators, relations } => {
            if relations.iter().any(|r| r.len() != *generators) {
                return Err(Error::Input(format!("vertex `{v}`: relation rows must have {generators} entries")));
            }
            let rel = if relations.is_empty() { Matrix::zeros(0, *generators) } else { Matrix::from_i64_rows(relations) };
            // Rows are relations; the presentation wants them as columns.
            FpAbelianGroup::new(*generators, rel.transpose())
        }
        _ => return Err(Error::Input(format!("vertex `{v}` is not abelian"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXPAR2: &str = r#"{
        "graph": {"vertices": ["a", "b"], "arrows": [
            {"name": "u0", "src": "a", "dst": "b"}, {"name": "u1", "src": "a", "dst": "b"}]},
        "groups": {"a": {"kind": "perm", "degree": 3, "generators": [[1, 0, 2]]},
                   "b": {"kind": "symmetric", "degree": 3}},
        "homs": {"u0": {"kind": "images", "images": [[1, 0, 2]]}, "u1": {"kind": "trivial"}}
    }"#;

    #[test]
    fn parse_and_round_trip() {
        let doc = InputDocument::parse(EXPAR2).unwrap();
        assert_eq!(InputDocument::parse(&doc.to_json()).unwrap(), doc);
        let Diagram::Group(d) = doc.to_diagram().unwrap() else { panic!() };
        assert_eq!(d.base().num_objects(), 2);
        assert_eq!(d.base().graph().arrows.len(), 2);
    }

    #[test]
    fn undefined_vertex_names_the_arrow() {
        let text = EXPAR2.replace(r#""src": "a", "dst": "b"}, {"name": "u1""#, r#""src": "z", "dst": "b"}, {"name": "u1""#);
        let err = InputDocument::parse(&text).unwrap().to_diagram().unwrap_err();
        assert!(err.to_string().contains("`u0`"), "{err}");
    }

    #[test]
    fn ill_defined_hom_names_arrow_and_relation() {
        // ℤ/2 → ℤ/3 sending the generator to a 3-cycle.
        let text = r#"{
            "graph": {"vertices": ["a", "b"], "arrows": [{"name": "f", "src": "a", "dst": "b"}]},
            "groups": {"a": {"kind": "cyclic", "order": 2}, "b": {"kind": "cyclic", "order": 3}},
            "homs": {"f": {"kind": "images", "images": [[1, 2, 0]]}}
        }"#;
        let err = InputDocument::parse(text).unwrap().to_diagram().unwrap_err();
        let Error::IllDefinedHom { name, detail } = &err else { panic!("{err}") };
        assert_eq!(name, "f");
        assert!(detail.contains("relation"), "{detail}");
    }

    #[test]
    fn abelian_documents() {
        let text = r#"{
            "graph": {"vertices": ["a", "b"], "arrows": [{"name": "f", "src": "a", "dst": "b"}]},
            "groups": {"a": {"kind": "free", "rank": 1}, "b": {"kind": "abelian", "generators": 1, "relations": [[4]]}},
            "homs": {"f": {"kind": "matrix", "rows": [[2]]}}
        }"#;
        let doc = InputDocument::parse(text).unwrap();
        let Diagram::Abelian(d) = doc.to_diagram().unwrap() else { panic!() };
        assert_eq!(d.object(1), &FpAbelianGroup::cyclic(4.into()));
        assert_eq!(InputDocument::parse(&doc.to_json()).unwrap(), doc);
    }
}
