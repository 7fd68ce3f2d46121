//! Free algebras of projection varieties.
//!
//! The free algebra on `k` generators of the variety generated by a finite
//! family `K` of projection algebras is the subalgebra of `∏ K` generated by
//! `k` tuples that differ pairwise in every coordinate. Everything here works
//! on explicit tuples in that product.

mod closure;
mod factor;
mod span;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Leaf, ModelError, ProjectionAlgebra};
use crate::term::{FunctionSymbol, Term, TermError, Vocabulary};

pub use factor::FactorVerdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("the family of models is empty")]
    EmptyFamily,
    #[error("model {model} does not interpret symbol `{symbol}`")]
    MissingSymbol { model: usize, symbol: String },
    #[error("tuple {tuple} has {found} coordinates, the family has {expected} models")]
    TupleLength {
        tuple: Tuple,
        expected: usize,
        found: usize,
    },
    #[error("tuple {tuple} has value {value} in coordinate {coordinate}, outside a carrier of size {carrier_size}")]
    TupleOutOfCarrier {
        tuple: Tuple,
        coordinate: usize,
        value: usize,
        carrier_size: usize,
    },
    #[error("variable x{variable} does not name one of the {generators} generators")]
    VariableOutOfRange { variable: u32, generators: usize },
    #[error("factor {factor} has {carrier_size} elements; {needed} pairwise distinct values are needed")]
    CarrierTooSmall {
        factor: usize,
        carrier_size: usize,
        needed: usize,
    },
    #[error("the {0} generators are not pairwise distinct in every coordinate")]
    NotFreeGenerating(&'static str),
    #[error("generator {0} of H is not in the subalgebra generated by L")]
    NotInClosure(Tuple),
    #[error("closure exceeded the limit of {limit} elements")]
    ClosureTooLarge { limit: usize },
}

/// An element of the product: one carrier element per member of the family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tuple(pub Vec<usize>);

impl Tuple {
    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for Tuple {
    fn from(coords: Vec<usize>) -> Self {
        Tuple(coords)
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// How one symbol acts on the product: the models grouped by the argument
/// position they project onto, in increasing position order.
#[derive(Debug, Clone)]
pub(crate) struct SymbolAction {
    pub(crate) classes: Vec<(usize, Vec<usize>)>,
}

/// The ambient family `K` together with its vocabulary.
#[derive(Debug, Clone)]
pub struct Family {
    vocabulary: Vocabulary,
    models: Vec<ProjectionAlgebra>,
    actions: Vec<SymbolAction>,
}

impl Family {
    pub fn new(vocabulary: Vocabulary, models: Vec<ProjectionAlgebra>) -> Result<Self, EngineError> {
        for (index, model) in models.iter().enumerate() {
            model.check_vocabulary(&vocabulary).map_err(|err| match err {
                ModelError::UnknownSymbol(symbol) => EngineError::MissingSymbol { model: index, symbol },
                other => EngineError::Model(other),
            })?;
        }
        let actions = vocabulary
            .symbols()
            .iter()
            .map(|symbol| {
                let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
                for (index, model) in models.iter().enumerate() {
                    let position = model.projection(&symbol.name).expect("checked above");
                    match classes.iter_mut().find(|(p, _)| *p == position) {
                        Some((_, members)) => members.push(index),
                        None => classes.push((position, alloc::vec![index])),
                    }
                }
                classes.sort_by_key(|(p, _)| *p);
                SymbolAction { classes }
            })
            .collect();
        Ok(Family {
            vocabulary,
            models,
            actions,
        })
    }

    /// Infers the vocabulary from the models' projection tables: every model
    /// must name the same symbols, and each symbol gets the smallest arity
    /// compatible with all of its projections.
    pub fn from_models(models: Vec<ProjectionAlgebra>) -> Result<Self, EngineError> {
        let mut names: BTreeSet<&String> = BTreeSet::new();
        for model in &models {
            names.extend(model.projections().keys());
        }
        let symbols = names.into_iter().map(|name| {
            let arity = models
                .iter()
                .filter_map(|m| m.projection(name))
                .max()
                .unwrap_or(0)
                + 1;
            FunctionSymbol::new(name.clone(), arity as u64)
        });
        let vocabulary = Vocabulary::new(symbols)?;
        Family::new(vocabulary, models)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn models(&self) -> &[ProjectionAlgebra] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn carrier_sizes(&self) -> Vec<usize> {
        self.models.iter().map(ProjectionAlgebra::carrier_size).collect()
    }

    pub(crate) fn actions(&self) -> &[SymbolAction] {
        &self.actions
    }

    pub fn check_tuple(&self, tuple: &Tuple) -> Result<(), EngineError> {
        if tuple.len() != self.models.len() {
            return Err(EngineError::TupleLength {
                tuple: tuple.clone(),
                expected: self.models.len(),
                found: tuple.len(),
            });
        }
        for (coordinate, (&value, model)) in tuple.0.iter().zip(&self.models).enumerate() {
            if value >= model.carrier_size() {
                return Err(EngineError::TupleOutOfCarrier {
                    tuple: tuple.clone(),
                    coordinate,
                    value,
                    carrier_size: model.carrier_size(),
                });
            }
        }
        Ok(())
    }

    pub fn check_tuples<'a>(&self, tuples: impl IntoIterator<Item = &'a Tuple>) -> Result<(), EngineError> {
        tuples.into_iter().try_for_each(|t| self.check_tuple(t))
    }

    /// Coordinate-wise projection action of `symbol`.
    pub fn apply_symbol(&self, symbol: &FunctionSymbol, args: &[Tuple]) -> Result<Tuple, EngineError> {
        let known = self
            .vocabulary
            .get(&symbol.name)
            .ok_or_else(|| TermError::UnknownSymbol(symbol.name.clone()))?;
        if !known.accepts(args.len()) || known.arity != symbol.arity {
            return Err(TermError::ArityMismatch {
                symbol: symbol.name.clone(),
                expected: known.arity.clone(),
                found: args.len(),
            }
            .into());
        }
        self.check_tuples(args)?;
        let coords = self
            .models
            .iter()
            .enumerate()
            .map(|(i, model)| {
                let position = model.projection(&symbol.name).expect("family is checked");
                args[position].0[i]
            })
            .collect();
        Ok(Tuple(coords))
    }

    /// The value of `term` in the product, with `x_i` bound to `generators[i]`
    /// and constants read from each model.
    pub fn evaluate(&self, generators: &[Tuple], term: &Term) -> Result<Tuple, EngineError> {
        self.check_tuples(generators)?;
        self.evaluate_unchecked(generators, term)
    }

    fn evaluate_unchecked(&self, generators: &[Tuple], term: &Term) -> Result<Tuple, EngineError> {
        term.check(&self.vocabulary)?;
        let coords = self
            .models
            .iter()
            .enumerate()
            .map(|(i, model)| match model.reduce(term)? {
                Leaf::Var(v) => {
                    generators
                        .get(v as usize)
                        .map(|g| g.0[i])
                        .ok_or(EngineError::VariableOutOfRange {
                            variable: v,
                            generators: generators.len(),
                        })
                }
                Leaf::Const(c) => Ok(model.interpret(&c)?),
            })
            .collect::<Result<_, _>>()?;
        Ok(Tuple(coords))
    }

    /// Decides `t1 = t2` in the subalgebra generated by `generators`.
    pub fn word_problem(&self, generators: &[Tuple], t1: &Term, t2: &Term) -> Result<bool, EngineError> {
        Ok(self.word_problem_witness(generators, t1, t2)?.is_none())
    }

    /// The first coordinate (0-based) in which `t1` and `t2` differ, if any.
    pub fn word_problem_witness(
        &self,
        generators: &[Tuple],
        t1: &Term,
        t2: &Term,
    ) -> Result<Option<usize>, EngineError> {
        let a = self.evaluate(generators, t1)?;
        let b = self.evaluate(generators, t2)?;
        Ok(a.0.iter().zip(&b.0).position(|(x, y)| x != y))
    }

    /// Whether the distinct members of `generators` differ pairwise in every
    /// coordinate.
    pub fn is_free_generating(&self, generators: &[Tuple]) -> bool {
        let distinct: BTreeSet<&Tuple> = generators.iter().collect();
        (0..self.models.len()).all(|i| {
            let values: BTreeSet<usize> = distinct.iter().map(|g| g.0[i]).collect();
            values.len() == distinct.len()
        })
    }

    /// `count` new tuples that keep `generators ∪ fresh` free generating: in
    /// each coordinate the smallest values not used by `generators`.
    pub fn extend_with_free(&self, generators: &[Tuple], count: usize) -> Result<Vec<Tuple>, EngineError> {
        self.check_tuples(generators)?;
        let mut columns = Vec::with_capacity(self.models.len());
        for (factor, model) in self.models.iter().enumerate() {
            let used: BTreeSet<usize> = generators.iter().map(|g| g.0[factor]).collect();
            let fresh: Vec<usize> = (0..model.carrier_size())
                .filter(|v| !used.contains(v))
                .take(count)
                .collect();
            if fresh.len() < count {
                return Err(EngineError::CarrierTooSmall {
                    factor,
                    carrier_size: model.carrier_size(),
                    needed: used.len() + count,
                });
            }
            columns.push(fresh);
        }
        Ok((0..count)
            .map(|j| Tuple(columns.iter().map(|column| column[j]).collect()))
            .collect())
    }
}

#[cfg(test)]
mod tests;
