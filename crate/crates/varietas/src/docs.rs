//! Versioned JSON documents read and written by the workbench.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use varietas_core::engine::EngineError;
use varietas_core::{Family, ProjectionAlgebra, StagePlan, Term, Tuple, Vocabulary};

use crate::WorkbenchError;

pub const SCHEMA_VERSION: u32 = 1;

/// Wraps a body with the schema version and document kind. The body must
/// serialize to a JSON object.
pub fn document(kind: &str, body: impl Serialize) -> Value {
    let mut value = json!({ "schema_version": SCHEMA_VERSION, "kind": kind });
    let body = serde_json::to_value(body).expect("documents serialize");
    let Value::Object(fields) = body else {
        panic!("document bodies are objects");
    };
    value.as_object_mut().expect("object").extend(fields);
    value
}

pub fn error_document(error: &WorkbenchError) -> Value {
    document(
        "error",
        json!({ "error": error.to_string(), "hint": error.hint() }),
    )
}

/// Pretty JSON with a trailing newline.
pub fn render(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    text
}

pub fn read_text(path: &Path) -> Result<String, WorkbenchError> {
    std::fs::read_to_string(path).map_err(|source| WorkbenchError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, WorkbenchError> {
    serde_json::from_str(text).map_err(|source| WorkbenchError::Parse {
        what: what.to_string(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, WorkbenchError> {
    parse(&read_text(path)?, &path.display().to_string())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanDocument {
    schema_version: u32,
    kind: String,
    stage_count: usize,
    plan: StagePlan,
}

pub fn plan_document(plan: &StagePlan) -> Value {
    document("stage_plan", json!({ "stage_count": plan.len(), "plan": plan }))
}

/// Reads a plan written by `varietas plan`.
pub fn read_plan(path: &Path) -> Result<StagePlan, WorkbenchError> {
    let doc: PlanDocument = read_json(path)?;
    if doc.schema_version != SCHEMA_VERSION || doc.kind != "stage_plan" {
        return Err(WorkbenchError::Schema(format!(
            "{} is a `{}` document of schema {}, expected a schema-{SCHEMA_VERSION} `stage_plan`",
            path.display(),
            doc.kind,
            doc.schema_version
        )));
    }
    if doc.stage_count != doc.plan.len() {
        return Err(WorkbenchError::Schema(format!(
            "stage_count {} disagrees with the {} listed stages",
            doc.stage_count,
            doc.plan.len()
        )));
    }
    Ok(doc.plan)
}

/// Input for the `closure`, `membership` and `free-factor` queries. The
/// vocabulary may be omitted, in which case it is inferred from the models.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineInput {
    pub models: Vec<ProjectionAlgebra>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vocabulary: Option<Vocabulary>,
    #[serde(default)]
    pub generators: Vec<Tuple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<Tuple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<u32>>,
    #[serde(default)]
    pub h: Vec<Tuple>,
    #[serde(default)]
    pub l: Vec<Tuple>,
}

impl EngineInput {
    pub fn family(&self) -> Result<Family, EngineError> {
        match &self.vocabulary {
            Some(v) => Family::new(v.clone(), self.models.clone()),
            None => Family::from_models(self.models.clone()),
        }
    }
}
