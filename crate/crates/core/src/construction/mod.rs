//! Stage plans, the partition-driven model builders, and the finite checks
//! run on their output.

mod builder;
mod enumeration;
mod partition;
mod plan;
mod report;
mod witness;

use alloc::string::String;

use crate::engine::EngineError;
use crate::model::ModelError;

pub use builder::{
    build_collapse_model, build_generic_model, BuiltModel, StageAction, StageTrace, DEFAULT_PAD,
};
pub use enumeration::{default_enumeration, Dovetail, StagePair};
pub use partition::EquivPartition;
pub use plan::{build_stage_plan, largest_arity_bits, Stage, StagePlan, MATERIALIZE_LIMIT};
pub use report::{Check, Counts, CpReport, Status, Truncation, Witness};
pub use witness::{cp1_finite_witness, verify_k0_truncation, witness_family, FACTOR_SEARCH_LIMIT};

#[derive(Debug, thiserror::Error)]
pub enum ConstructionError {
    #[error("invalid plan at stage {stage}: {detail}")]
    InvalidPlan { stage: usize, detail: String },
    #[error("partition invariant broken{}: {detail}", stage.map(|s| alloc::format!(" at stage {s}")).unwrap_or_default())]
    InvariantViolation { stage: Option<usize>, detail: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The plan over the default enumeration.
pub fn default_plan(stages: usize) -> StagePlan {
    build_stage_plan(stages, Dovetail::new())
}
