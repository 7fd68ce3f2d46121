use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::term::ConstantName;
use crate::union_find::UnionFind;

/// Equivalence relation on constant names, grown stage by stage.
///
/// Names are interned on first use; anything never interned is a singleton.
#[derive(Debug, Clone, Default)]
pub struct EquivPartition {
    names: Vec<ConstantName>,
    ids: BTreeMap<ConstantName, usize>,
    cells: UnionFind,
    seed_merges: usize,
    stage: usize,
}

impl EquivPartition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: ConstantName) -> usize {
        if let Some(&id) = self.ids.get(&name) {
            return id;
        }
        let id = self.cells.push();
        self.names.push(name);
        self.ids.insert(name, id);
        id
    }

    pub fn union(&mut self, a: ConstantName, b: ConstantName) -> bool {
        let (a, b) = (self.intern(a), self.intern(b));
        self.cells.union(a, b)
    }

    /// Merges made before stage 0; they count towards the budget.
    pub(crate) fn seed(&mut self, a: ConstantName, b: ConstantName) {
        if self.union(a, b) {
            self.seed_merges += 1;
        }
    }

    pub fn same(&self, a: &ConstantName, b: &ConstantName) -> bool {
        match (self.ids.get(a), self.ids.get(b)) {
            (Some(&a), Some(&b)) => self.cells.same(a, b),
            _ => a == b,
        }
    }

    pub fn is_singleton(&self, name: &ConstantName) -> bool {
        self.ids.get(name).is_none_or(|&id| self.cells.set_size(id) == 1)
    }

    /// Members of `name`'s cell, in name order.
    pub fn cell_of(&self, name: &ConstantName) -> Vec<ConstantName> {
        let Some(&id) = self.ids.get(name) else {
            return alloc::vec![*name];
        };
        let root = self.cells.find(id);
        let mut members: Vec<ConstantName> = (0..self.names.len())
            .filter(|&i| self.cells.find(i) == root)
            .map(|i| self.names[i])
            .collect();
        members.sort_unstable();
        members
    }

    /// Non-singleton cells and singletons alike, each sorted, ordered by least
    /// member. Only interned names appear.
    pub fn cells(&self) -> Vec<Vec<ConstantName>> {
        let mut cells: Vec<Vec<ConstantName>> = self
            .cells
            .groups()
            .into_iter()
            .map(|g| {
                let mut names: Vec<ConstantName> = g.into_iter().map(|i| self.names[i]).collect();
                names.sort_unstable();
                names
            })
            .collect();
        cells.sort_unstable();
        cells
    }

    /// `Σ (|cell| - 1)`.
    pub fn merge_budget_used(&self) -> usize {
        self.cells.merges()
    }

    pub fn seed_merges(&self) -> usize {
        self.seed_merges
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub(crate) fn advance(&mut self) {
        self.stage += 1;
    }

    /// Checks the merge budget (seed merges plus `2·stage`) and level
    /// separation in every cell. Returns a description of the first problem.
    pub fn check(&self) -> Result<(), String> {
        let budget = self.seed_merges + 2 * self.stage;
        if self.merge_budget_used() > budget {
            return Err(format!(
                "{} merges exceed the budget of {budget}",
                self.merge_budget_used()
            ));
        }
        for cell in self.cells().iter().filter(|c| c.len() > 1) {
            level_separation(cell)?;
        }
        Ok(())
    }
}

/// A cell may hold at most one `c(l,·)` per level, at most one `d(·)`, and no
/// `c(l,·)` with `l > i` next to `d(i)`.
pub(crate) fn level_separation(cell: &[ConstantName]) -> Result<(), String> {
    let mut levels: BTreeMap<u32, ConstantName> = BTreeMap::new();
    let mut d: Option<u32> = None;
    for &name in cell {
        match name {
            ConstantName::C { m, .. } => {
                if let Some(other) = levels.insert(m, name) {
                    return Err(format!("{other} and {name} share a cell"));
                }
            }
            ConstantName::D { n } => {
                if let Some(other) = d.replace(n) {
                    return Err(format!("d({other}) and {name} share a cell"));
                }
            }
        }
    }
    if let Some(i) = d {
        if let Some((_, c)) = levels.range(i + 1..).next() {
            return Err(format!("d({i}) and {c} share a cell"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separation_rules() {
        let c = ConstantName::c;
        let d = ConstantName::d;
        assert!(level_separation(&[c(0, 0), c(1, 3), d(2)]).is_ok());
        assert!(level_separation(&[c(1, 0), c(1, 1)]).is_err());
        assert!(level_separation(&[d(0), d(1)]).is_err());
        assert!(level_separation(&[c(3, 0), d(2)]).is_err());
        assert!(level_separation(&[c(2, 0), d(2)]).is_ok());
    }

    #[test]
    fn budget_counts_seed() {
        let mut p = EquivPartition::new();
        p.seed(ConstantName::c(0, 0), ConstantName::d(3));
        assert_eq!(p.merge_budget_used(), 1);
        assert!(p.check().is_ok());
        p.union(ConstantName::c(0, 1), ConstantName::c(1, 0));
        assert!(p.check().is_err());
        p.advance();
        assert!(p.check().is_ok());
        assert!(p.same(&ConstantName::d(3), &ConstantName::c(0, 0)));
        assert!(p.is_singleton(&ConstantName::c(5, 5)));
        assert_eq!(p.cell_of(&ConstantName::c(1, 0)).len(), 2);
    }
}
