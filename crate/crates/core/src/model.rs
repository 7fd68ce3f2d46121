//! Finite projection algebras.
//!
//! Every function symbol acts as the projection onto one fixed argument
//! position, so a term collapses to a single leaf (a variable or a constant)
//! and laws can be decided without enumerating assignments.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::{ConstantName, Equation, Term, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("carrier must have at least one element")]
    EmptyCarrier,
    #[error("constant {constant} is interpreted as {value}, outside a carrier of size {carrier_size}")]
    ConstantOutOfCarrier {
        constant: ConstantName,
        value: usize,
        carrier_size: usize,
    },
    #[error("constant {0} appears twice in the model")]
    DuplicateConstant(ConstantName),
    #[error("no projection for function symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` projects onto position {position}, but has only {found} arguments")]
    ProjectionOutOfRange {
        symbol: String,
        position: usize,
        found: usize,
    },
    #[error("symbol `{symbol}` projects onto position {position}, not below its arity")]
    ProjectionBeyondArity { symbol: String, position: usize },
    #[error("constant {0} is not interpreted in the model")]
    UninterpretedConstant(ConstantName),
    #[error("variable x{0} has no value in the assignment")]
    UnassignedVariable(u32),
    #[error("assignment maps x{variable} to {value}, outside a carrier of size {carrier_size}")]
    ValueOutOfCarrier {
        variable: u32,
        value: usize,
        carrier_size: usize,
    },
}

/// The leaf a term reduces to under projection semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Leaf {
    Var(u32),
    Const(ConstantName),
}

impl From<Leaf> for Term {
    fn from(leaf: Leaf) -> Term {
        match leaf {
            Leaf::Var(v) => Term::Var(v),
            Leaf::Const(c) => Term::Const(c),
        }
    }
}

/// A projection algebra on the carrier `0..carrier_size`, with explicit
/// interpretations for the constants it knows about.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectionAlgebra {
    carrier_size: usize,
    projections: BTreeMap<String, usize>,
    constants: BTreeMap<ConstantName, usize>,
}

impl ProjectionAlgebra {
    pub fn new(
        carrier_size: usize,
        projections: BTreeMap<String, usize>,
        constants: BTreeMap<ConstantName, usize>,
    ) -> Result<Self, ModelError> {
        if carrier_size == 0 {
            return Err(ModelError::EmptyCarrier);
        }
        if let Some((&constant, &value)) = constants.iter().find(|(_, &v)| v >= carrier_size) {
            return Err(ModelError::ConstantOutOfCarrier {
                constant,
                value,
                carrier_size,
            });
        }
        Ok(ProjectionAlgebra {
            carrier_size,
            projections,
            constants,
        })
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    pub fn projections(&self) -> &BTreeMap<String, usize> {
        &self.projections
    }

    pub fn constants(&self) -> &BTreeMap<ConstantName, usize> {
        &self.constants
    }

    pub fn projection(&self, symbol: &str) -> Option<usize> {
        self.projections.get(symbol).copied()
    }

    pub fn interpret(&self, constant: &ConstantName) -> Result<usize, ModelError> {
        self.constants
            .get(constant)
            .copied()
            .ok_or(ModelError::UninterpretedConstant(*constant))
    }

    /// Every symbol of `vocabulary` must have a projection below its arity.
    pub fn check_vocabulary(&self, vocabulary: &Vocabulary) -> Result<(), ModelError> {
        for symbol in vocabulary.symbols() {
            let position = self
                .projection(&symbol.name)
                .ok_or_else(|| ModelError::UnknownSymbol(symbol.name.clone()))?;
            if !symbol.has_position(position) {
                return Err(ModelError::ProjectionBeyondArity {
                    symbol: symbol.name.clone(),
                    position,
                });
            }
        }
        Ok(())
    }

    /// Follows projections down to the surviving leaf. Linear in the depth
    /// of the path taken, never worse than linear in the term.
    pub fn reduce(&self, term: &Term) -> Result<Leaf, ModelError> {
        let mut current = term;
        loop {
            match current {
                Term::Var(v) => return Ok(Leaf::Var(*v)),
                Term::Const(c) => return Ok(Leaf::Const(*c)),
                Term::App(app) => {
                    let position = self
                        .projection(&app.f)
                        .ok_or_else(|| ModelError::UnknownSymbol(app.f.clone()))?;
                    current = app
                        .args
                        .get(position)
                        .ok_or_else(|| ModelError::ProjectionOutOfRange {
                            symbol: app.f.clone(),
                            position,
                            found: app.args.len(),
                        })?;
                }
            }
        }
    }

    pub fn eval_leaf(&self, leaf: Leaf, assignment: &[usize]) -> Result<usize, ModelError> {
        match leaf {
            Leaf::Var(v) => {
                let value = *assignment
                    .get(v as usize)
                    .ok_or(ModelError::UnassignedVariable(v))?;
                if value >= self.carrier_size {
                    return Err(ModelError::ValueOutOfCarrier {
                        variable: v,
                        value,
                        carrier_size: self.carrier_size,
                    });
                }
                Ok(value)
            }
            Leaf::Const(c) => self.interpret(&c),
        }
    }

    /// Value of `term` with variable `x_i` bound to `assignment[i]`.
    pub fn eval(&self, term: &Term, assignment: &[usize]) -> Result<usize, ModelError> {
        self.eval_leaf(self.reduce(term)?, assignment)
    }

    /// Whether `lhs = rhs` holds for every assignment, where both sides are
    /// already reduced.
    pub fn leaves_agree(&self, lhs: Leaf, rhs: Leaf) -> Result<bool, ModelError> {
        match (lhs, rhs) {
            (Leaf::Var(a), Leaf::Var(b)) if a == b => Ok(true),
            (Leaf::Const(a), Leaf::Const(b)) => Ok(self.interpret(&a)? == self.interpret(&b)?),
            (Leaf::Const(c), Leaf::Var(_)) | (Leaf::Var(_), Leaf::Const(c)) => {
                self.interpret(&c)?;
                Ok(self.carrier_size <= 1)
            }
            (Leaf::Var(_), Leaf::Var(_)) => Ok(self.carrier_size <= 1),
        }
    }

    pub fn law_holds(&self, equation: &Equation) -> Result<bool, ModelError> {
        self.leaves_agree(self.reduce(&equation.lhs)?, self.reduce(&equation.rhs)?)
    }
}

/// Conjunction of [`ProjectionAlgebra::law_holds`] over a family; these are
/// exactly the laws of the variety the family generates.
pub fn law_holds_in_family(equation: &Equation, family: &[ProjectionAlgebra]) -> Result<bool, ModelError> {
    for model in family {
        if !model.law_holds(equation)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Serialize, Deserialize)]
struct ConstantEntry {
    #[serde(flatten)]
    name: ConstantName,
    value: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelWire {
    carrier_size: usize,
    projections: BTreeMap<String, usize>,
    #[serde(default)]
    constants: Vec<ConstantEntry>,
}

impl Serialize for ProjectionAlgebra {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ModelWire {
            carrier_size: self.carrier_size,
            projections: self.projections.clone(),
            constants: self
                .constants
                .iter()
                .map(|(&name, &value)| ConstantEntry { name, value })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProjectionAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = ModelWire::deserialize(deserializer)?;
        let mut constants = BTreeMap::new();
        for entry in wire.constants {
            if constants.insert(entry.name, entry.value).is_some() {
                return Err(serde::de::Error::custom(ModelError::DuplicateConstant(
                    entry.name,
                )));
            }
        }
        ProjectionAlgebra::new(wire.carrier_size, wire.projections, constants)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::FunctionSymbol;
    use alloc::vec;

    fn vocab() -> Vocabulary {
        Vocabulary::new([
            FunctionSymbol::new("f", 3u32),
            FunctionSymbol::new("g", 2u32),
            FunctionSymbol::new("h", 2u32),
        ])
        .unwrap()
    }

    fn model(carrier: usize, f: usize, g: usize, constants: &[(ConstantName, usize)]) -> ProjectionAlgebra {
        ProjectionAlgebra::new(
            carrier,
            BTreeMap::from([("f".into(), f), ("g".into(), g), ("h".into(), 0)]),
            constants.iter().copied().collect(),
        )
        .unwrap()
    }

    #[test]
    fn reduce_examples() {
        let v = vocab();
        let m = model(3, 1, 1, &[]);
        let t = v
            .apply("f", vec![Term::var(0), Term::var(1), Term::var(2)])
            .unwrap();
        assert_eq!(m.reduce(&t).unwrap(), Leaf::Var(1));
        assert_eq!(m.reduce(&Term::var(0)).unwrap(), Leaf::Var(0));

        // f(g(a, b), c) with f -> 0 and g -> 1 lands on b.
        let (a, b, c) = (Term::var(0), Term::var(1), Term::var(2));
        let v2 = Vocabulary::new([FunctionSymbol::new("f", 2u32), FunctionSymbol::new("g", 2u32)]).unwrap();
        let inner = v2.apply("g", vec![a, b]).unwrap();
        let t = v2.apply("f", vec![inner, c]).unwrap();
        let m = ProjectionAlgebra::new(
            2,
            BTreeMap::from([("f".into(), 0), ("g".into(), 1)]),
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(m.reduce(&t).unwrap(), Leaf::Var(1));
    }

    #[test]
    fn eval_examples() {
        let v = vocab();
        let d2 = ConstantName::d(2);
        let m = model(8, 0, 1, &[(d2, 5)]);
        assert_eq!(m.eval(&Term::var(0), &[4]).unwrap(), 4);
        let t = v.apply("g", vec![Term::var(0), Term::var(1)]).unwrap();
        assert_eq!(m.eval(&t, &[2, 7]).unwrap(), 7);
        assert_eq!(m.eval(&Term::constant(d2), &[]).unwrap(), 5);
        assert_eq!(
            m.eval(&Term::var(3), &[0]),
            Err(ModelError::UnassignedVariable(3))
        );
        assert!(matches!(
            m.eval(&Term::constant(ConstantName::d(9)), &[]),
            Err(ModelError::UninterpretedConstant(_))
        ));
    }

    #[test]
    fn law_examples() {
        let v = vocab();
        let x = Term::var(0);
        let y = Term::var(1);
        let m2 = model(2, 0, 0, &[]);
        assert!(m2.law_holds(&Equation::new(x.clone(), x.clone())).unwrap());
        assert!(!m2.law_holds(&Equation::new(x.clone(), y.clone())).unwrap());
        assert!(model(1, 0, 0, &[]).law_holds(&Equation::new(x, y)).unwrap());

        // d0 = g(c01, d1) with g -> 0 and d0, c01 sharing a value.
        let d0 = ConstantName::d(0);
        let c01 = ConstantName::c(0, 1);
        let m3 = model(3, 0, 0, &[(d0, 2), (c01, 2), (ConstantName::d(1), 0)]);
        let rhs = v
            .apply("g", vec![Term::constant(c01), Term::constant(ConstantName::d(1))])
            .unwrap();
        let law = Equation::new(Term::constant(d0), rhs);
        assert!(m3.law_holds(&law).unwrap());
        // Brute force over all assignments of the (absent) variables agrees.
        for a in 0..3 {
            assert_eq!(m3.eval(&law.lhs, &[a]).unwrap(), m3.eval(&law.rhs, &[a]).unwrap());
        }
    }

    #[test]
    fn family_conjunction() {
        let x = Term::var(0);
        let v = vocab();
        let gx = v.apply("g", vec![x.clone(), Term::var(1)]).unwrap();
        let law = Equation::new(gx, x.clone());
        let first = model(2, 0, 0, &[]);
        let second = model(2, 0, 1, &[]);
        assert!(law_holds_in_family(&Equation::new(x.clone(), x), &[first.clone(), second.clone()]).unwrap());
        assert!(law_holds_in_family(&law, core::slice::from_ref(&first)).unwrap());
        assert!(!law_holds_in_family(&law, &[first, second]).unwrap());
    }

    #[test]
    fn vocabulary_check() {
        let v = vocab();
        assert!(model(2, 2, 1, &[]).check_vocabulary(&v).is_ok());
        assert!(matches!(
            model(2, 0, 2, &[]).check_vocabulary(&v),
            Err(ModelError::ProjectionBeyondArity { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let m = model(3, 2, 1, &[(ConstantName::c(0, 1), 2), (ConstantName::d(0), 1)]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"{"carrier_size":3,"projections":{"f":2,"g":1,"h":0},"constants":[{"kind":"C","m":0,"n":1,"value":2},{"kind":"D","n":0,"value":1}]}"#
        );
        assert_eq!(serde_json::from_str::<ProjectionAlgebra>(&json).unwrap(), m);
        assert!(serde_json::from_str::<ProjectionAlgebra>(
            r#"{"carrier_size":1,"projections":{},"constants":[{"kind":"D","n":0,"value":1}]}"#
        )
        .is_err());
    }
}
