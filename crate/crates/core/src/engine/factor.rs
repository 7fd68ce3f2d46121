use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{EngineError, Family, Tuple};

/// Outcome of [`Family::free_factor_search`]. Both verdicts are relative to
/// the finite family: `NotFactor` means no complement exists inside this
/// truncation's closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FactorVerdict {
    IsFactor { witness: Vec<Tuple> },
    NotFactor,
}

impl FactorVerdict {
    pub fn is_factor(&self) -> bool {
        matches!(self, FactorVerdict::IsFactor { .. })
    }
}

impl Family {
    /// Searches for `G ⊆ ⟨L⟩` with `H ∪ G` free generating and
    /// `⟨H ∪ G⟩ = ⟨L⟩`.
    ///
    /// When `H ⊆ L` the complement `L \ H` is returned directly. Otherwise
    /// candidate sets are enumerated by size, then lexicographically, so the
    /// returned witness is the smallest one in that order. `limit` bounds
    /// every closure the search computes.
    pub fn free_factor_search(
        &self,
        h_generators: &[Tuple],
        l_generators: &[Tuple],
        limit: usize,
    ) -> Result<FactorVerdict, EngineError> {
        self.check_tuples(h_generators.iter().chain(l_generators))?;
        if !self.is_free_generating(h_generators) {
            return Err(EngineError::NotFreeGenerating("H"));
        }
        if !self.is_free_generating(l_generators) {
            return Err(EngineError::NotFreeGenerating("L"));
        }
        let h: BTreeSet<Tuple> = h_generators.iter().cloned().collect();
        let l: BTreeSet<Tuple> = l_generators.iter().cloned().collect();
        if h.is_subset(&l) {
            return Ok(FactorVerdict::IsFactor {
                witness: l.difference(&h).cloned().collect(),
            });
        }

        let l_vec: Vec<Tuple> = l.into_iter().collect();
        let target = self.closure_within(&l_vec, limit)?;
        if let Some(outside) = h.iter().find(|x| !target.contains(*x)) {
            return Err(EngineError::NotInClosure(outside.clone()));
        }
        let candidates: Vec<&Tuple> = target
            .iter()
            .filter(|x| !h.contains(*x))
            .filter(|x| h.iter().all(|y| coordinate_distinct(x, y)))
            .collect();
        let base: Vec<Tuple> = h.iter().cloned().collect();

        for size in 0..=candidates.len() {
            let mut chosen = Vec::with_capacity(size);
            if let Some(witness) = self.search_size(&candidates, &base, target.len(), size, 0, &mut chosen)? {
                return Ok(FactorVerdict::IsFactor { witness });
            }
        }
        Ok(FactorVerdict::NotFactor)
    }

    fn search_size(
        &self,
        candidates: &[&Tuple],
        base: &[Tuple],
        target_size: usize,
        size: usize,
        start: usize,
        chosen: &mut Vec<usize>,
    ) -> Result<Option<Vec<Tuple>>, EngineError> {
        if chosen.len() == size {
            let mut generators = base.to_vec();
            generators.extend(chosen.iter().map(|&i| candidates[i].clone()));
            // Everything generated lies inside the target, so equal sizes
            // mean equal closures.
            let reached = self.closure_within(&generators, target_size)?;
            return Ok((reached.len() == target_size)
                .then(|| chosen.iter().map(|&i| candidates[i].clone()).collect()));
        }
        for next in start..candidates.len() {
            if candidates.len() - next < size - chosen.len() {
                break;
            }
            if chosen
                .iter()
                .all(|&i| coordinate_distinct(candidates[i], candidates[next]))
            {
                chosen.push(next);
                let found = self.search_size(candidates, base, target_size, size, next + 1, chosen)?;
                chosen.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
        Ok(None)
    }

    /// Re-checks a claimed witness: `H ∪ G` free generating and generating
    /// the same subalgebra as `L`.
    pub fn validate_factor_witness(
        &self,
        h_generators: &[Tuple],
        witness: &[Tuple],
        l_generators: &[Tuple],
    ) -> Result<bool, EngineError> {
        let mut combined = h_generators.to_vec();
        combined.extend_from_slice(witness);
        if !self.is_free_generating(&combined) {
            return Ok(false);
        }
        Ok(self.subalgebra_closure(&combined)? == self.subalgebra_closure(l_generators)?)
    }
}

fn coordinate_distinct(a: &Tuple, b: &Tuple) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| x != y)
}
