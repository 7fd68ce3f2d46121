use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::partition::EquivPartition;
use super::plan::StagePlan;
use super::ConstructionError;
use crate::model::ProjectionAlgebra;
use crate::term::ConstantName;

/// Default number of extra constant levels kept in a model beyond the
/// largest level the plan mentions.
pub const DEFAULT_PAD: u32 = 8;

/// What a builder did at one stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum StageAction {
    /// `t_n` was already equivalent to the argument at `position`.
    Projected { position: usize },
    /// `t_n` was merged with `argument` (and with `anchor`, a level-0
    /// constant, when its cell had none).
    Merged {
        position: usize,
        argument: ConstantName,
        anchor: Option<ConstantName>,
    },
}

impl StageAction {
    pub fn position(&self) -> usize {
        match *self {
            StageAction::Projected { position } | StageAction::Merged { position, .. } => position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stage: usize,
    pub action: StageAction,
    /// `Σ (|cell| - 1)` after this stage.
    pub budget_used: usize,
}

/// A model together with the partition that produced it.
#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub model: ProjectionAlgebra,
    /// Constants `c(a,b)` with `a + b ≤ window` and `d(n)` with `n ≤ window`
    /// are all interpreted, as is every constant the builder merged.
    pub window: u32,
    pub partition: EquivPartition,
    pub trace: Vec<StageTrace>,
    /// `Some(m)` for the collapse model with `c(0,0) = d(m)`.
    pub collapse: Option<u32>,
}

impl BuiltModel {
    pub fn label(&self) -> String {
        match self.collapse {
            Some(m) => alloc::format!("collapse[{m}]"),
            None => String::from("generic"),
        }
    }
}

/// Builds the model in which `c(0,0)` and `d(m)` are identified.
pub fn build_collapse_model(plan: &StagePlan, m: u32, pad: u32) -> Result<BuiltModel, ConstructionError> {
    build(plan, Some(m), pad)
}

/// Builds the model without the initial identification.
pub fn build_generic_model(plan: &StagePlan, pad: u32) -> Result<BuiltModel, ConstructionError> {
    build(plan, None, pad)
}

fn violation(stage: Option<usize>, detail: String) -> ConstructionError {
    ConstructionError::InvariantViolation { stage, detail }
}

fn build(plan: &StagePlan, collapse: Option<u32>, pad: u32) -> Result<BuiltModel, ConstructionError> {
    let mut partition = EquivPartition::new();
    if let Some(m) = collapse {
        partition.seed(ConstantName::c(0, 0), ConstantName::d(m));
    }
    partition.check().map_err(|d| violation(None, d))?;

    let mut projections = BTreeMap::new();
    let mut trace = Vec::with_capacity(plan.len());
    for stage in plan.stages() {
        let members = partition.cell_of(&stage.t);
        let existing = members.iter().filter_map(|c| stage.position_of(c)).min();
        let action = match existing {
            Some(position) => StageAction::Projected { position },
            None => {
                // At most 2n + 1 cells are non-singletons so far, and k_n
                // exceeds that for plans from `build_stage_plan`.
                let limit = (2 * stage.stage as u64 + partition.seed_merges() as u64 + 2)
                    .min(u64::from(u32::MAX)) as u32;
                let j = (0..=limit)
                    .find(|&j| {
                        stage.position_of(&ConstantName::c(stage.m, j)).is_some()
                            && partition.is_singleton(&ConstantName::c(stage.m, j))
                    })
                    .ok_or_else(|| {
                        violation(
                            Some(stage.stage),
                            String::from("no unmerged argument constant is left"),
                        )
                    })?;
                let argument = ConstantName::c(stage.m, j);
                partition.union(stage.t, argument);
                let has_level_0 = members.iter().any(|c| matches!(c, ConstantName::C { m: 0, .. }));
                let anchor = if stage.m != 0 && !has_level_0 {
                    let k = (0..)
                        .find(|&k| partition.is_singleton(&ConstantName::c(0, k)))
                        .expect("only finitely many constants are merged");
                    let anchor = ConstantName::c(0, k);
                    partition.union(stage.t, anchor);
                    Some(anchor)
                } else {
                    None
                };
                StageAction::Merged {
                    position: stage.m as usize + j as usize,
                    argument,
                    anchor,
                }
            }
        };
        partition.advance();
        partition.check().map_err(|d| violation(Some(stage.stage), d))?;
        projections.insert(stage.symbol.name.clone(), action.position());
        trace.push(StageTrace {
            stage: stage.stage,
            action,
            budget_used: partition.merge_budget_used(),
        });
    }

    let window = plan.max_level().saturating_add(pad);
    for level in 0..=window {
        partition.intern(ConstantName::d(level));
        for n in 0..=window - level {
            partition.intern(ConstantName::c(level, n));
        }
    }
    let cells = partition.cells();
    let mut constants = BTreeMap::new();
    for (value, cell) in cells.iter().enumerate() {
        for &name in cell {
            constants.insert(name, value);
        }
    }
    let model = ProjectionAlgebra::new(cells.len(), projections, constants)
        .map_err(|e| violation(None, alloc::format!("{e}")))?;
    Ok(BuiltModel {
        model,
        window,
        partition,
        trace,
        collapse,
    })
}
