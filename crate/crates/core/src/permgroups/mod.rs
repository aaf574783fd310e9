//! Finite permutation groups and the subgroup calculus on them.

mod calc;
mod group;
mod hom;
mod perm;

pub use calc::{
    abelianization, abelianized_map, commutator, fat_commutator, intersect, is_normal, join,
    normal_closure, quotient, Abelianization, NormalSubgroupList, MAX_FAT_COMMUTATOR_TERMS,
};
pub use group::{Elements, PermGroup, DEFAULT_ELEMENT_BOUND};
pub use hom::{graph_subgroup_order, GroupHom};
pub use perm::Perm;
