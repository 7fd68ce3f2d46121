use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::enumeration::StagePair;
use super::ConstructionError;
use crate::model::{Leaf, ModelError, ProjectionAlgebra};
use crate::term::{Application, ConstantName, Equation, FunctionSymbol, Term, Vocabulary};

/// Stage equations whose arity is at most this are materialised as ordinary
/// [`Equation`]s by [`Stage::equation`].
pub const MATERIALIZE_LIMIT: usize = 4096;

/// One stage: the symbol `f_n` of arity `m + k` and the equation
/// `t = f_n(d(0)..d(m-1), c(m,0)..c(m,k-1))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stage {
    pub stage: usize,
    pub t: ConstantName,
    pub m: u32,
    pub symbol: FunctionSymbol,
    #[serde(with = "crate::bigint_serde")]
    pub k: BigUint,
}

impl Stage {
    /// The argument constant at `position`, if the position is below the
    /// arity.
    pub fn argument(&self, position: usize) -> Option<ConstantName> {
        let m = self.m as usize;
        if position < m {
            return Some(ConstantName::d(position as u32));
        }
        let j = position - m;
        if BigUint::from(j) >= self.k {
            return None;
        }
        u32::try_from(j).ok().map(|j| ConstantName::c(self.m, j))
    }

    /// The argument position holding `constant`, if it is an argument.
    pub fn position_of(&self, constant: &ConstantName) -> Option<usize> {
        match *constant {
            ConstantName::D { n } if n < self.m => Some(n as usize),
            ConstantName::C { m, n } if m == self.m && BigUint::from(n) < self.k => {
                Some(self.m as usize + n as usize)
            }
            _ => None,
        }
    }

    /// Sum of the indices of every constant occurrence in the equation.
    pub fn index_sum(&self) -> BigUint {
        let m = BigUint::from(self.m);
        let k = &self.k;
        let mut sum = BigUint::from(self.t.index());
        if self.m > 0 {
            sum += &m * (&m - 1u32) / 2u32;
        }
        sum += k * &m;
        if !k.is_zero() {
            sum += k * (k - 1u32) / 2u32;
        }
        sum
    }

    /// The equation as a term pair, when the arity is small enough to write
    /// out.
    pub fn equation(&self) -> Option<Equation> {
        let arity = self.symbol.small_arity().filter(|&a| a <= MATERIALIZE_LIMIT)?;
        let args = (0..arity)
            .map(|p| self.argument(p).map(Term::Const))
            .collect::<Option<Vec<_>>>()?;
        Some(Equation::new(
            Term::Const(self.t),
            Term::App(Application {
                f: self.symbol.name.clone(),
                args,
            }),
        ))
    }

    /// The leaf the right-hand side reduces to in `model`.
    pub fn reduce_rhs(&self, model: &ProjectionAlgebra) -> Result<Leaf, ModelError> {
        let position = model
            .projection(&self.symbol.name)
            .ok_or_else(|| ModelError::UnknownSymbol(self.symbol.name.clone()))?;
        self.argument(position)
            .map(Leaf::Const)
            .ok_or_else(|| ModelError::ProjectionBeyondArity {
                symbol: self.symbol.name.clone(),
                position,
            })
    }

    /// Whether the stage equation holds in `model`, with the same semantics
    /// as [`ProjectionAlgebra::law_holds`].
    pub fn holds_in(&self, model: &ProjectionAlgebra) -> Result<bool, ModelError> {
        model.leaves_agree(Leaf::Const(self.t), self.reduce_rhs(model)?)
    }
}

/// A finite prefix of the stage-wise construction.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct StagePlan {
    stages: Vec<Stage>,
}

impl StagePlan {
    /// Validates a list of stages: consecutive numbering, distinct symbol
    /// names, `arity = m + k`, and `arity` strictly above
    /// `m + index(t) + Σ_{j<n} S_j`.
    pub fn from_stages(stages: Vec<Stage>) -> Result<Self, ConstructionError> {
        let mut names = BTreeSet::new();
        let mut previous = BigUint::zero();
        for (n, stage) in stages.iter().enumerate() {
            let bad = |detail: String| ConstructionError::InvalidPlan { stage: n, detail };
            if stage.stage != n {
                return Err(bad(format!("stage is numbered {}", stage.stage)));
            }
            if !names.insert(stage.symbol.name.as_str()) {
                return Err(bad(format!("symbol `{}` is reused", stage.symbol.name)));
            }
            if BigUint::from(stage.m) + &stage.k != stage.symbol.arity {
                return Err(bad(String::from("arity differs from m + k")));
            }
            let bound = BigUint::from(stage.m) + stage.t.index() + &previous;
            if stage.symbol.arity <= bound {
                return Err(bad(format!("arity must exceed {bound}")));
            }
            previous += stage.index_sum();
        }
        Ok(StagePlan { stages })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary::new(self.stages.iter().map(|s| s.symbol.clone())).expect("plan symbols are validated")
    }

    /// Largest `index(t_n)` or `m_n` over the plan.
    pub fn max_level(&self) -> u32 {
        self.stages
            .iter()
            .map(|s| (s.t.index().min(u64::from(u32::MAX)) as u32).max(s.m))
            .max()
            .unwrap_or(0)
    }
}

impl<'de> Deserialize<'de> for StagePlan {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            stages: Vec<Stage>,
        }
        let wire = Wire::deserialize(deserializer)?;
        StagePlan::from_stages(wire.stages).map_err(serde::de::Error::custom)
    }
}

/// Builds the first `count` stages from `pairs`.
///
/// With `B_n = m_n + index(t_n) + Σ_{j<n} S_j` (where `S_j` is the index sum
/// of equation `j`) the symbol `f_n` gets arity `B_n + 2n + 2`. Anything
/// above `B_n` satisfies the growth condition; the extra `2n + 1` guarantees
/// that the collapse-model builder always finds an unmerged `c(m_n, j)`
/// argument, since at most `2n + 1` cells are non-singletons before stage
/// `n`.
pub fn build_stage_plan(count: usize, pairs: impl IntoIterator<Item = StagePair>) -> StagePlan {
    let mut stages = Vec::with_capacity(count);
    let mut previous = BigUint::zero();
    for (n, (t, m)) in pairs.into_iter().take(count).enumerate() {
        let bound = BigUint::from(m) + t.index() + &previous;
        let arity = bound + (2 * n as u64 + 2);
        let k = &arity - m;
        let stage = Stage {
            stage: n,
            t,
            m,
            symbol: FunctionSymbol::new(format!("f_{n}"), arity),
            k,
        };
        previous += stage.index_sum();
        stages.push(stage);
    }
    StagePlan { stages }
}

/// Bit length of the largest arity in the plan.
pub fn largest_arity_bits(plan: &StagePlan) -> u64 {
    plan.stages()
        .iter()
        .map(|s| s.symbol.arity.bits())
        .max()
        .unwrap_or(0)
}
