//! Vocabularies, terms and equations.
//!
//! Constants `c(m,n)` and `d(n)` are a separate sort: they are not symbols of
//! the variety's language, they name fixed carrier elements of the expanded
//! models. Function symbols always have arity at least one.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown function symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has arity {expected} but was applied to {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: BigUint,
        found: usize,
    },
    #[error("variable x{0} is not mapped by the assignment")]
    UnmappedVariable(u32),
    #[error("duplicate function symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("function symbol `{0}` must have arity at least 1")]
    NullarySymbol(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FunctionSymbol {
    pub name: String,
    #[serde(with = "crate::bigint_serde")]
    pub arity: BigUint,
}

impl FunctionSymbol {
    pub fn new(name: impl Into<String>, arity: impl Into<BigUint>) -> Self {
        FunctionSymbol {
            name: name.into(),
            arity: arity.into(),
        }
    }

    /// The arity as a `usize`, when it fits.
    pub fn small_arity(&self) -> Option<usize> {
        self.arity.to_usize()
    }

    pub fn accepts(&self, argument_count: usize) -> bool {
        self.small_arity() == Some(argument_count)
    }

    /// Whether `position` is a valid argument position.
    pub fn has_position(&self, position: usize) -> bool {
        BigUint::from(position) < self.arity
    }
}

/// An ordered list of function symbols with unique names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    symbols: Vec<FunctionSymbol>,
    by_name: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn new(symbols: impl IntoIterator<Item = FunctionSymbol>) -> Result<Self, TermError> {
        let mut vocabulary = Vocabulary::default();
        for symbol in symbols {
            vocabulary.push(symbol)?;
        }
        Ok(vocabulary)
    }

    pub fn push(&mut self, symbol: FunctionSymbol) -> Result<(), TermError> {
        if symbol.arity == BigUint::from(0u8) {
            return Err(TermError::NullarySymbol(symbol.name));
        }
        if self.by_name.contains_key(&symbol.name) {
            return Err(TermError::DuplicateSymbol(symbol.name));
        }
        self.by_name.insert(symbol.name.clone(), self.symbols.len());
        self.symbols.push(symbol);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&FunctionSymbol> {
        self.by_name.get(name).map(|&i| &self.symbols[i])
    }

    pub fn symbols(&self) -> &[FunctionSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Builds `name(args)`, checking the arity.
    pub fn apply(&self, name: &str, args: Vec<Term>) -> Result<Term, TermError> {
        let symbol = self
            .get(name)
            .ok_or_else(|| TermError::UnknownSymbol(name.into()))?;
        if !symbol.accepts(args.len()) {
            return Err(TermError::ArityMismatch {
                symbol: name.into(),
                expected: symbol.arity.clone(),
                found: args.len(),
            });
        }
        Ok(Term::App(Application { f: name.into(), args }))
    }
}

impl Serialize for Vocabulary {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.symbols.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vocabulary {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let symbols = Vec::<FunctionSymbol>::deserialize(deserializer)?;
        Vocabulary::new(symbols).map_err(serde::de::Error::custom)
    }
}

/// `c(m,n)` or `d(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ConstantName {
    C { m: u32, n: u32 },
    D { n: u32 },
}

impl ConstantName {
    pub const fn c(m: u32, n: u32) -> Self {
        ConstantName::C { m, n }
    }

    pub const fn d(n: u32) -> Self {
        ConstantName::D { n }
    }

    /// `d(n)` has index `n`, `c(m,n)` has index `m + n`.
    pub fn index(&self) -> u64 {
        match *self {
            ConstantName::D { n } => u64::from(n),
            ConstantName::C { m, n } => u64::from(m) + u64::from(n),
        }
    }

    /// Whether the constant belongs to the level-`l` generating list
    /// `{c(l,n) : n} ∪ {d(n) : n < l}`.
    pub fn at_level(&self, level: u32) -> bool {
        match *self {
            ConstantName::C { m, .. } => m == level,
            ConstantName::D { n } => n < level,
        }
    }
}

impl fmt::Display for ConstantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantName::C { m, n } => write!(f, "c({m},{n})"),
            ConstantName::D { n } => write!(f, "d({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Application {
    pub f: String,
    pub args: Vec<Term>,
}

/// A finite term. Arity is checked against a [`Vocabulary`], either at
/// construction through [`Vocabulary::apply`] or afterwards with
/// [`Term::check`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Term {
    Var(u32),
    Const(ConstantName),
    App(Application),
}

impl Term {
    pub fn var(index: u32) -> Self {
        Term::Var(index)
    }

    pub fn constant(name: ConstantName) -> Self {
        Term::Const(name)
    }

    pub fn check(&self, vocabulary: &Vocabulary) -> Result<(), TermError> {
        match self {
            Term::Var(_) | Term::Const(_) => Ok(()),
            Term::App(app) => {
                let symbol = vocabulary
                    .get(&app.f)
                    .ok_or_else(|| TermError::UnknownSymbol(app.f.clone()))?;
                if !symbol.accepts(app.args.len()) {
                    return Err(TermError::ArityMismatch {
                        symbol: app.f.clone(),
                        expected: symbol.arity.clone(),
                        found: app.args.len(),
                    });
                }
                app.args.iter().try_for_each(|arg| arg.check(vocabulary))
            }
        }
    }

    /// Every constant occurrence, with multiplicity.
    pub fn constants(&self) -> BTreeMap<ConstantName, usize> {
        let mut out = BTreeMap::new();
        self.visit_leaves(&mut |leaf| {
            if let Term::Const(c) = leaf {
                *out.entry(*c).or_insert(0) += 1;
            }
        });
        out
    }

    /// Variable indices occurring in the term, ascending.
    pub fn variables(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.visit_leaves(&mut |leaf| {
            if let Term::Var(v) = leaf {
                out.push(*v);
            }
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(app) => 1 + app.args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::App(app) => 1 + app.args.iter().map(Term::size).sum::<usize>(),
        }
    }

    fn visit_leaves<'a>(&'a self, visit: &mut impl FnMut(&'a Term)) {
        match self {
            Term::Var(_) | Term::Const(_) => visit(self),
            Term::App(app) => app.args.iter().for_each(|arg| arg.visit_leaves(visit)),
        }
    }

    /// Simultaneous substitution of variables.
    pub fn substitute(&self, assignment: &BTreeMap<u32, Term>) -> Result<Term, TermError> {
        match self {
            Term::Var(v) => assignment.get(v).cloned().ok_or(TermError::UnmappedVariable(*v)),
            Term::Const(_) => Ok(self.clone()),
            Term::App(app) => Ok(Term::App(Application {
                f: app.f.clone(),
                args: app
                    .args
                    .iter()
                    .map(|arg| arg.substitute(assignment))
                    .collect::<Result<_, _>>()?,
            })),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "x{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::App(app) => {
                write!(f, "{}(", app.f)?;
                for (i, arg) in app.args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn check(&self, vocabulary: &Vocabulary) -> Result<(), TermError> {
        self.lhs.check(vocabulary)?;
        self.rhs.check(vocabulary)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}
