//! Membership by decomposition along head symbols.
//!
//! Adding the law `f(z_0..z_n) = z_i` to the variety generated by `K` gives
//! the variety generated by `K_i = {M ∈ K : f projects onto i in M}`. A value
//! `f(t_0..t_n)` lies in `⟨Y⟩` over `K` exactly when each `t_i` lies in `⟨Y⟩`
//! over `K_i`, so membership is decided one head symbol at a time on ever
//! smaller sub-families, never building the closure.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{EngineError, Family, Tuple};
use crate::term::Term;

impl Family {
    /// Decides whether the value of `term` (over `generators`, variables
    /// indexing into it) lies in the subalgebra generated by the generators
    /// listed in `targets`.
    pub fn membership_decomposition(
        &self,
        generators: &[Tuple],
        term: &Term,
        targets: &BTreeSet<u32>,
    ) -> Result<bool, EngineError> {
        if self.is_empty() {
            return Err(EngineError::EmptyFamily);
        }
        self.check_tuples(generators)?;
        term.check(self.vocabulary())?;
        for &variable in targets.iter().chain(term.variables().iter()) {
            if variable as usize >= generators.len() {
                return Err(EngineError::VariableOutOfRange {
                    variable,
                    generators: generators.len(),
                });
            }
        }
        let mut search = SpanSearch {
            family: self,
            targets: targets.iter().map(|&v| &generators[v as usize]).collect(),
            memo: BTreeMap::new(),
        };
        let everything: Vec<usize> = (0..self.len()).collect();
        search.decompose(generators, targets, &everything, term)
    }

    /// Whether `element` lies in `⟨generators⟩`, decided by the same
    /// sub-family induction with the head symbol chosen by search.
    pub fn membership_span(&self, generators: &[Tuple], element: &Tuple) -> Result<bool, EngineError> {
        if self.is_empty() {
            return Err(EngineError::EmptyFamily);
        }
        self.check_tuples(generators)?;
        self.check_tuple(element)?;
        let mut search = SpanSearch {
            family: self,
            targets: generators.iter().collect(),
            memo: BTreeMap::new(),
        };
        let everything: Vec<usize> = (0..self.len()).collect();
        Ok(search.in_span(&everything, &element.0))
    }
}

struct SpanSearch<'a> {
    family: &'a Family,
    targets: Vec<&'a Tuple>,
    memo: BTreeMap<(Vec<usize>, Vec<usize>), bool>,
}

impl SpanSearch<'_> {
    fn decompose(
        &mut self,
        generators: &[Tuple],
        targets: &BTreeSet<u32>,
        models: &[usize],
        term: &Term,
    ) -> Result<bool, EngineError> {
        match term {
            Term::Var(v) if targets.contains(v) => Ok(true),
            Term::Var(_) | Term::Const(_) => {
                let value = self.leaf_value(generators, models, term)?;
                Ok(self.in_span(models, &value))
            }
            Term::App(app) => {
                let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for &model in models {
                    let position = self.family.models()[model]
                        .projection(&app.f)
                        .expect("term is checked against the family vocabulary");
                    groups.entry(position).or_default().push(model);
                }
                for (position, group) in groups {
                    if !self.decompose(generators, targets, &group, &app.args[position])? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Full-length value vector of a leaf; only the `models` coordinates are
    /// meaningful.
    fn leaf_value(
        &self,
        generators: &[Tuple],
        models: &[usize],
        leaf: &Term,
    ) -> Result<Vec<usize>, EngineError> {
        let mut value = alloc::vec![0; self.family.len()];
        for &model in models {
            value[model] = match leaf {
                Term::Var(v) => generators[*v as usize].0[model],
                Term::Const(c) => self.family.models()[model].interpret(c)?,
                Term::App(_) => unreachable!("leaf_value is only called on leaves"),
            };
        }
        Ok(value)
    }

    /// `value` restricted to `models` is in the span of the targets
    /// restricted to `models` iff some target already agrees there, or some
    /// symbol splits `models` into at least two classes that are each in the
    /// span. A shortest witnessing term has a head symbol of the second kind,
    /// which makes the recursion exact; every class is strictly smaller, so it
    /// terminates.
    fn in_span(&mut self, models: &[usize], value: &[usize]) -> bool {
        if self.targets.is_empty() {
            return false;
        }
        if models.is_empty() {
            return true;
        }
        let key = (
            models.to_vec(),
            models.iter().map(|&m| value[m]).collect::<Vec<_>>(),
        );
        if let Some(&known) = self.memo.get(&key) {
            return known;
        }
        let direct = self
            .targets
            .iter()
            .any(|t| models.iter().all(|&m| t.0[m] == value[m]));
        let found = direct || self.split_search(models, value);
        self.memo.insert(key, found);
        found
    }

    fn split_search(&mut self, models: &[usize], value: &[usize]) -> bool {
        let family = self.family;
        let mut tried: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
        for action in family.actions() {
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (position, members) in &action.classes {
                for &m in members {
                    if models.contains(&m) {
                        groups.entry(*position).or_default().push(m);
                    }
                }
            }
            if groups.len() < 2 {
                continue;
            }
            let mut parts: Vec<Vec<usize>> = groups.into_values().collect();
            parts.iter_mut().for_each(|p| p.sort_unstable());
            parts.sort();
            if !tried.insert(parts.clone()) {
                continue;
            }
            if parts.iter().all(|part| self.in_span(part, value)) {
                return true;
            }
        }
        false
    }
}
