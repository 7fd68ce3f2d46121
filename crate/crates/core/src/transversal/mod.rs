//! Families of finite sets: transversals, Hall violators, almost freeness,
//! and finite tree systems on which families can be based.

mod matching;
mod tree;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use matching::{maximum_matching, Matching};
pub use tree::{
    based_family_to_setfamily, validate_tree_system, BasedFamily, BasedSet, Node, TreeSystem, Violation,
};

pub type Atom = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransversalError {
    #[error("set {index} contains atom {atom}, which is not in the universe")]
    AtomOutsideUniverse { index: u32, atom: Atom },
    #[error("set index {0} is used twice")]
    DuplicateIndex(u32),
    #[error("invalid based family: {0}")]
    InvalidBasedFamily(alloc::string::String),
}

/// An indexed family of subsets of a finite universe.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct SetFamily {
    universe: BTreeSet<Atom>,
    sets: BTreeMap<u32, BTreeSet<Atom>>,
}

impl SetFamily {
    pub fn new(
        universe: impl IntoIterator<Item = Atom>,
        sets: impl IntoIterator<Item = (u32, Vec<Atom>)>,
    ) -> Result<Self, TransversalError> {
        let universe: BTreeSet<Atom> = universe.into_iter().collect();
        let mut map = BTreeMap::new();
        for (index, set) in sets {
            let set: BTreeSet<Atom> = set.into_iter().collect();
            if let Some(&atom) = set.iter().find(|a| !universe.contains(a)) {
                return Err(TransversalError::AtomOutsideUniverse { index, atom });
            }
            if map.insert(index, set).is_some() {
                return Err(TransversalError::DuplicateIndex(index));
            }
        }
        Ok(SetFamily { universe, sets: map })
    }

    /// Sets indexed `0..`, over the union of the sets.
    pub fn from_sets<I, S>(sets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = Atom>,
    {
        let sets: BTreeMap<u32, BTreeSet<Atom>> = sets
            .into_iter()
            .enumerate()
            .map(|(i, s)| (i as u32, s.into_iter().collect()))
            .collect();
        let universe = sets.values().flatten().copied().collect();
        SetFamily { universe, sets }
    }

    pub fn universe(&self) -> &BTreeSet<Atom> {
        &self.universe
    }

    pub fn sets(&self) -> &BTreeMap<u32, BTreeSet<Atom>> {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// The subfamily with the given indices (unknown indices are ignored).
    pub fn subfamily(&self, indices: impl IntoIterator<Item = u32>) -> SetFamily {
        let sets = indices
            .into_iter()
            .filter_map(|i| self.sets.get(&i).map(|s| (i, s.clone())))
            .collect();
        SetFamily {
            universe: self.universe.clone(),
            sets,
        }
    }

    pub fn without(&self, index: u32) -> SetFamily {
        let mut out = self.clone();
        out.sets.remove(&index);
        out
    }

    /// Union of the sets with the given indices.
    pub fn union_of<'a>(&self, indices: impl IntoIterator<Item = &'a u32>) -> BTreeSet<Atom> {
        indices
            .into_iter()
            .filter_map(|i| self.sets.get(i))
            .flatten()
            .copied()
            .collect()
    }
}

impl<'de> Deserialize<'de> for SetFamily {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            universe: Vec<Atom>,
            sets: BTreeMap<u32, Vec<Atom>>,
        }
        let wire = Wire::deserialize(deserializer)?;
        SetFamily::new(wire.universe, wire.sets).map_err(serde::de::Error::custom)
    }
}

/// Either an injective choice of members or a subfamily too large for its
/// union.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TransversalOutcome {
    Transversal { assignment: BTreeMap<u32, Atom> },
    Violator { sets: Vec<u32>, union: Vec<Atom> },
}

impl TransversalOutcome {
    pub fn is_transversal(&self) -> bool {
        matches!(self, TransversalOutcome::Transversal { .. })
    }
}

/// Maximum matching between set indices and atoms. A perfect matching on the
/// set side is a transversal; otherwise the sets reachable from an unmatched
/// set by alternating paths form a Hall violator.
pub fn find_transversal(family: &SetFamily) -> TransversalOutcome {
    let indices: Vec<u32> = family.sets.keys().copied().collect();
    let atoms: Vec<Atom> = family.universe.iter().copied().collect();
    let adjacency: Vec<Vec<usize>> = family
        .sets
        .values()
        .map(|set| {
            set.iter()
                .map(|a| atoms.binary_search(a).expect("sets lie inside the universe"))
                .collect()
        })
        .collect();
    let matching = maximum_matching(&adjacency, atoms.len());
    if matching.size == indices.len() {
        let assignment = matching
            .left
            .iter()
            .enumerate()
            .map(|(i, r)| (indices[i], atoms[r.expect("perfect on the left")]))
            .collect();
        return TransversalOutcome::Transversal { assignment };
    }
    let sets: Vec<u32> = matching.hall_violator.iter().map(|&i| indices[i]).collect();
    let union = family.union_of(&sets).into_iter().collect();
    TransversalOutcome::Violator { sets, union }
}

pub fn is_free(family: &SetFamily) -> bool {
    find_transversal(family).is_transversal()
}

/// Every subfamily of smaller size is free. Freeness passes to subfamilies,
/// so it suffices to drop one set at a time; the empty family counts as
/// almost free.
pub fn is_almost_free(family: &SetFamily) -> bool {
    if is_free(family) {
        return true;
    }
    family.sets.keys().all(|&i| is_free(&family.without(i)))
}

#[cfg(test)]
mod tests;
