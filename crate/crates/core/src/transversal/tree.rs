use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Atom, SetFamily, TransversalError};

/// One node `η` of a tree system. The index set `E_η` is the set of child
/// keys. Label `0` marks a final (countable) node; positive labels are sizes
/// compared as integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub label: u64,
    #[serde(default)]
    pub base: BTreeSet<Atom>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub children: BTreeMap<u64, Node>,
}

impl Node {
    pub fn is_final(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeSystem {
    pub height: usize,
    pub root: Node,
}

impl TreeSystem {
    /// Every node with its path, in lexicographic path order.
    pub fn nodes(&self) -> Vec<(Vec<u64>, &Node)> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![(Vec::new(), &self.root)];
        while let Some((path, node)) = stack.pop() {
            for (&beta, child) in node.children.iter().rev() {
                let mut p = path.clone();
                p.push(beta);
                stack.push((p, child));
            }
            out.push((path, node));
        }
        out
    }

    pub fn node(&self, path: &[u64]) -> Option<&Node> {
        path.iter()
            .try_fold(&self.root, |node, beta| node.children.get(beta))
    }

    pub fn node_mut(&mut self, path: &[u64]) -> Option<&mut Node> {
        path.iter()
            .try_fold(&mut self.root, |node, beta| node.children.get_mut(beta))
    }

    pub fn final_nodes(&self) -> Vec<Vec<u64>> {
        self.nodes()
            .into_iter()
            .filter(|(_, n)| n.is_final())
            .map(|(p, _)| p)
            .collect()
    }

    /// `∪ { B_{η↾m} : m ≤ |η| }`.
    pub fn accumulated_base(&self, path: &[u64]) -> Option<BTreeSet<Atom>> {
        let mut node = &self.root;
        let mut acc = node.base.clone();
        for beta in path {
            node = node.children.get(beta)?;
            acc.extend(node.base.iter().copied());
        }
        Some(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub node: Vec<u64>,
    pub clause: String,
    pub detail: String,
}

/// Checks the finite form of the tree-system conditions. An empty result
/// means the system is valid.
///
/// Stationarity of `E_η` in `λ_η` is replaced by "nonempty and containing
/// `λ_η − 1`", and continuity of the base chains is vacuous because a finite
/// index set has no limit points.
pub fn validate_tree_system(system: &TreeSystem) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut report = |node: &[u64], clause: &str, detail: String| {
        out.push(Violation {
            node: node.to_vec(),
            clause: String::from(clause),
            detail,
        })
    };
    if !system.root.base.is_empty() {
        report(&[], "root base", String::from("the root base must be empty"));
    }
    for (path, node) in system.nodes() {
        if path.len() > system.height {
            report(
                &path,
                "height",
                format!("depth {} exceeds height {}", path.len(), system.height),
            );
        }
        match (node.is_final(), node.label == 0) {
            (true, false) => report(
                &path,
                "final nodes",
                format!("final node has label {}", node.label),
            ),
            (false, true) => report(
                &path,
                "final nodes",
                String::from("label 0 on a node with children"),
            ),
            _ => {}
        }
        if path.len() == system.height && !node.is_final() {
            report(&path, "height", String::from("node at full height has children"));
        }
        if node.is_final() {
            if node.label > 0 {
                report(&path, "stationarity", String::from("index set is empty"));
            }
            continue;
        }
        let lambda = node.label;
        if lambda == 0 {
            continue;
        }
        if !node.children.contains_key(&(lambda - 1)) {
            report(
                &path,
                "stationarity",
                format!("index set does not contain {}", lambda - 1),
            );
        }
        let mut previous: Option<(u64, &BTreeSet<Atom>)> = None;
        for (&beta, child) in &node.children {
            let mut at = path.clone();
            at.push(beta);
            if beta >= lambda {
                report(&at, "index range", format!("index {beta} is not below {lambda}"));
            }
            if child.label != 0 && child.label >= lambda {
                report(
                    &at,
                    "decreasing labels",
                    format!("label {} is not below {lambda}", child.label),
                );
            }
            let size = child.base.len() as u64;
            if size < child.label {
                report(
                    &at,
                    "base size",
                    format!("|B| = {size} is below the label {}", child.label),
                );
            }
            if size >= lambda {
                report(&at, "base size", format!("|B| = {size} is not below {lambda}"));
            }
            if let Some((gamma, before)) = previous {
                if !before.is_subset(&child.base) {
                    report(
                        &at,
                        "increasing chain",
                        format!("B at index {gamma} is not contained in B at index {beta}"),
                    );
                }
            }
            previous = Some((beta, &child.base));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasedSet {
    pub node: Vec<u64>,
    pub set: BTreeSet<Atom>,
}

/// A set `s_η ⊆ B̄_η` for every final node `η` of a valid system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasedFamily {
    pub system: TreeSystem,
    pub sets: Vec<BasedSet>,
}

/// The family `{s_η : η final}`, indexed `0..` in path order, over the
/// union of the accumulated bases.
pub fn based_family_to_setfamily(family: &BasedFamily) -> Result<SetFamily, TransversalError> {
    let invalid = |s: String| TransversalError::InvalidBasedFamily(s);
    if let Some(v) = validate_tree_system(&family.system).first() {
        return Err(invalid(format!("{:?}: {} ({})", v.node, v.clause, v.detail)));
    }
    let by_node: BTreeMap<&Vec<u64>, &BTreeSet<Atom>> =
        family.sets.iter().map(|s| (&s.node, &s.set)).collect();
    if by_node.len() != family.sets.len() {
        return Err(invalid(String::from("a node carries two sets")));
    }
    let finals = family.system.final_nodes();
    if let Some(extra) = by_node.keys().find(|p| !finals.contains(p)) {
        return Err(invalid(format!("{extra:?} is not a final node")));
    }
    let mut universe = BTreeSet::new();
    let mut sets = Vec::with_capacity(finals.len());
    for (index, path) in finals.iter().enumerate() {
        let set = by_node
            .get(path)
            .ok_or_else(|| invalid(format!("final node {path:?} has no set")))?;
        let base = family.system.accumulated_base(path).expect("path exists");
        if !set.is_subset(&base) {
            return Err(invalid(format!(
                "the set at {path:?} leaves its accumulated base"
            )));
        }
        universe.extend(base);
        sets.push((index as u32, set.iter().copied().collect()));
    }
    SetFamily::new(universe, sets)
}
