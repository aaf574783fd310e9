//! First nonvanishing non-Abelian homology of a group diagram over a free
//! category, read off the short exact sequences
//! `0 → colim H_n(𝒢) → colim_{n-1}𝒢 → coLim₁ H_{n-1}(𝒢) → 0`.

use std::fmt;

use serde::Serialize;

use crate::colimits::{colim_group, ColimResult};
use crate::diagramhomology::{colim_ab, flow_subgroup};
use crate::diagrams::{abelianize, homology_diagram, GroupDiagram};
use crate::error::{Error, Result};
use crate::shapes::CategoryKind;
use crate::FpAbelianGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    Zero,
    Left,
    Right,
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesRecord {
    /// The `n` in `colim H_n`; the middle term is `colim_{n-1}`.
    pub dimension: usize,
    pub left: FpAbelianGroup,
    pub right: FpAbelianGroup,
    pub resolution: Resolution,
}

impl SesRecord {
    pub fn new(dimension: usize, left: FpAbelianGroup, right: FpAbelianGroup) -> Self {
        let resolution = match (left.is_trivial(), right.is_trivial()) {
            (true, true) => Resolution::Zero,
            (false, true) => Resolution::Left,
            (true, false) => Resolution::Right,
            (false, false) => Resolution::Ambiguous,
        };
        SesRecord { dimension, left, right, resolution }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cocon {
    Exact(usize),
    AtLeast(usize),
}

impl fmt::Display for Cocon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cocon::Exact(n) => write!(f, "{n}"),
            Cocon::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum FirstGroup {
    /// `cocon = 0`: the colimit itself.
    Colim(ColimResult),
    Abelian(FpAbelianGroup),
    /// Extension of `right` by `left`, not resolved.
    Ambiguous { left: FpAbelianGroup, right: FpAbelianGroup },
    /// Nothing nonzero found up to the search limit.
    None,
}

impl fmt::Display for FirstGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FirstGroup::Colim(ColimResult::Trivial) => write!(f, "1"),
            FirstGroup::Colim(ColimResult::Finite { group, .. }) => match group.order() {
                Ok(n) => write!(f, "group of order {n}"),
                Err(_) => write!(f, "finite group"),
            },
            FirstGroup::Colim(ColimResult::Unknown { bound }) => write!(f, "unknown (> {bound} cosets)"),
            FirstGroup::Abelian(g) => write!(f, "{g}"),
            FirstGroup::Ambiguous { left, right } => write!(f, "extension of {right} by {left}"),
            FirstGroup::None => write!(f, "none found"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConnectivityReport {
    pub cocon: Cocon,
    pub first_group: FirstGroup,
    pub trail: Vec<SesRecord>,
}

/// `cocon 𝒢` and `colim_{cocon} 𝒢`, searching up to `colim_{max_dim}`.
pub fn connectivity(d: &GroupDiagram, max_dim: usize, max_cosets: usize) -> Result<ConnectivityReport> {
    if d.base().kind() != CategoryKind::Free {
        return Err(Error::PreconditionFailed("connectivity needs a free base category".into()));
    }
    if max_dim == 0 {
        return Err(Error::PreconditionFailed("max_dim must be at least 1".into()));
    }
    let colim = colim_group(d, max_cosets)?;
    match colim {
        ColimResult::Unknown { bound } => return Err(Error::UnknownColim(bound)),
        ColimResult::Finite { .. } => {
            return Ok(ConnectivityReport { cocon: Cocon::Exact(0), first_group: FirstGroup::Colim(colim), trail: vec![] })
        }
        ColimResult::Trivial => {}
    }
    let mut trail = Vec::new();
    let mut below = homology_diagram(d, 1)?;
    for n in 2..=max_dim + 1 {
        let here = homology_diagram(d, n)?;
        let rec = SesRecord::new(n, colim_ab(&here)?, flow_subgroup(&below)?);
        let first_group = match rec.resolution {
            Resolution::Zero => None,
            Resolution::Left => Some(FirstGroup::Abelian(rec.left.clone())),
            Resolution::Right => Some(FirstGroup::Abelian(rec.right.clone())),
            Resolution::Ambiguous => Some(FirstGroup::Ambiguous { left: rec.left.clone(), right: rec.right.clone() }),
        };
        trail.push(rec);
        if let Some(first_group) = first_group {
            return Ok(ConnectivityReport { cocon: Cocon::Exact(n - 1), first_group, trail });
        }
        below = here;
    }
    Ok(ConnectivityReport { cocon: Cocon::AtLeast(max_dim + 1), first_group: FirstGroup::None, trail })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparReport {
    pub colim_h2: FpAbelianGroup,
    /// Whether `colim₁𝒢 → coLim₁ 𝒢_ab` is an isomorphism.
    pub iso: bool,
    pub colim1_ab: FpAbelianGroup,
}

/// For diagrams with trivial colimit: `colim₁𝒢 ≅ coLim₁ 𝒢_ab` exactly when
/// `colim H₂(𝒢)` vanishes.
pub fn compar_criterion(d: &GroupDiagram, max_cosets: usize) -> Result<ComparReport> {
    match colim_group(d, max_cosets)? {
        ColimResult::Trivial => {}
        ColimResult::Finite { .. } => return Err(Error::PreconditionFailed("colimit is nontrivial".into())),
        ColimResult::Unknown { bound } => {
            return Err(Error::PreconditionFailed(format!("colimit unknown within {bound} cosets")))
        }
    }
    let colim_h2 = colim_ab(&homology_diagram(d, 2)?)?;
    let colim1_ab = flow_subgroup(&abelianize(d)?)?;
    Ok(ComparReport { iso: colim_h2.is_trivial(), colim_h2, colim1_ab })
}
