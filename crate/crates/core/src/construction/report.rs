use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::engine::Tuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The truncation is too small to decide the check.
    Insufficient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Complement `G` with `⟨H ∪ G⟩ = ⟨L⟩`, `H ∪ G` free generating.
    FactorComplement {
        generators: Vec<String>,
        tuples: Vec<Tuple>,
    },
    /// A coordinate in which the element's value is not taken by any
    /// generator, so no term can reach it.
    Obstruction {
        coordinate: usize,
        model: String,
        uncovered: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub section: String,
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub stages: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pad: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub models: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub insufficient: usize,
}

/// Outcome of a batch of checks on a finite truncation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpReport {
    pub truncation: Truncation,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub counts: Counts,
    pub checks: Vec<Check>,
}

impl CpReport {
    pub fn new(truncation: Truncation) -> Self {
        CpReport {
            truncation,
            ..Self::default()
        }
    }

    pub fn push(&mut self, section: &str, name: String, status: Status, detail: String) {
        self.push_with(section, name, status, detail, None);
    }

    pub fn push_with(
        &mut self,
        section: &str,
        name: String,
        status: Status,
        detail: String,
        witness: Option<Witness>,
    ) {
        match status {
            Status::Pass => self.counts.pass += 1,
            Status::Fail => self.counts.fail += 1,
            Status::Insufficient => self.counts.insufficient += 1,
        }
        self.checks.push(Check {
            section: String::from(section),
            name,
            status,
            detail,
            witness,
        });
    }

    /// Every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status != Status::Pass)
    }

    pub fn section<'a>(&'a self, section: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.section == section)
    }
}
