use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::perm::Perm;
use crate::error::{Error, Result};

pub const DEFAULT_ELEMENT_BOUND: usize = 100_000;

/// The enumerated elements of a group, sorted by image array.
#[derive(Debug)]
pub struct Elements {
    list: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl Elements {
    fn new(mut list: Vec<Perm>) -> Self {
        list.sort();
        let index = list.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Elements { list, index }
    }

    pub fn list(&self) -> &[Perm] {
        &self.list
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn get(&self, i: usize) -> &Perm {
        &self.list[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }
}

/// A finite group of permutations given by generators.
///
/// The element set is enumerated once, on first use.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    bound: usize,
    cache: OnceLock<Result<Arc<Elements>>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Input(format!(
                "generator {g} has degree {} but the group has degree {degree}",
                g.degree()
            )));
        }
        Ok(PermGroup {
            degree,
            generators,
            bound: DEFAULT_ELEMENT_BOUND,
            cache: OnceLock::new(),
        })
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self.cache = OnceLock::new();
        self
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, vec![]).expect("no generators")
    }

    /// `ℤ/m` acting regularly on `m` points.
    pub fn cyclic(m: usize) -> Self {
        if m <= 1 {
            return Self::trivial(1);
        }
        let shift: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        Self::new(m, vec![Perm::from_images(shift).expect("rotation")]).expect("degree matches")
    }

    pub fn symmetric(d: usize) -> Self {
        if d <= 1 {
            return Self::trivial(d.max(1));
        }
        let mut gens = vec![Perm::from_cycles(d, &[&[0, 1]]).expect("transposition")];
        if d > 2 {
            let cycle: Vec<usize> = (0..d).collect();
            gens.push(Perm::from_cycles(d, &[&cycle]).expect("long cycle"));
        }
        Self::new(d, gens).expect("degree matches")
    }

    pub fn alternating(d: usize) -> Self {
        if d <= 2 {
            return Self::trivial(d.max(1));
        }
        let gens = (2..d)
            .map(|i| Perm::from_cycles(d, &[&[0, 1, i]]).expect("3-cycle"))
            .collect();
        Self::new(d, gens).expect("degree matches")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn elements(&self) -> Result<&Elements> {
        match self.cache.get_or_init(|| self.enumerate().map(Arc::new)) {
            Ok(e) => Ok(e),
            Err(e) => Err(e.clone()),
        }
    }

    fn enumerate(&self) -> Result<Elements> {
        let id = self.identity();
        let mut seen: HashMap<Perm, ()> = HashMap::from([(id.clone(), ())]);
        let mut list = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = x.compose(g);
                if seen.insert(y.clone(), ()).is_none() {
                    if list.len() >= self.bound {
                        return Err(Error::bound("group enumeration", self.bound));
                    }
                    list.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(Elements::new(list))
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, p: &Perm) -> Result<bool> {
        Ok(p.degree() == self.degree && self.elements()?.contains(p))
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Perm::is_identity)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter()
            .all(|a| g.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        if self.degree != other.degree {
            return Ok(false);
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as sets of permutations.
    pub fn same_elements(&self, other: &PermGroup) -> Result<bool> {
        Ok(self.degree == other.degree
            && self.order()? == other.order()?
            && self.is_subgroup_of(other)?)
    }

    /// Subgroup generated by `candidates`, keeping only the elements that
    /// enlarge the group generated so far.
    pub fn generated_by(&self, candidates: impl IntoIterator<Item = Perm>) -> Result<PermGroup> {
        let mut current = PermGroup::trivial(self.degree).with_bound(self.bound);
        for c in candidates {
            if c.is_identity() || current.contains(&c)? {
                continue;
            }
            let mut gens = current.generators.clone();
            gens.push(c);
            current = PermGroup::new(self.degree, gens)?.with_bound(self.bound);
            current.elements()?;
        }
        Ok(current)
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, gens {:?})", self.degree, self.generators)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_orders() {
        assert_eq!(PermGroup::symmetric(3).order().unwrap(), 6);
        assert_eq!(PermGroup::symmetric(4).order().unwrap(), 24);
        assert_eq!(PermGroup::alternating(4).order().unwrap(), 12);
        assert_eq!(PermGroup::alternating(5).order().unwrap(), 60);
        assert_eq!(PermGroup::cyclic(2).order().unwrap(), 2);
        assert_eq!(PermGroup::cyclic(1).order().unwrap(), 1);
        assert_eq!(PermGroup::trivial(3).order().unwrap(), 1);
    }

    #[test]
    fn elements_sorted_by_images() {
        let s3 = PermGroup::symmetric(3);
        let e = s3.elements().unwrap();
        assert!(e.get(0).is_identity());
        assert!(e.list().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bound_is_enforced() {
        let s5 = PermGroup::symmetric(5).with_bound(100);
        assert!(matches!(s5.order(), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn degree_mismatch_rejected() {
        assert!(PermGroup::new(3, vec![Perm::identity(2)]).is_err());
    }
}
