//! The on-disk problem-document format and its mapping onto
//! [`MoqpInstance`].
//!
//! A document is a single JSON object:
//!
//! ```json
//! {
//!   "name": "optional",
//!   "n": 2, "m": 1, "p": 4,
//!   "Q": [[[1, 3], [3, 8]], ...],
//!   "c": [[2.5, -0.5], ...],
//!   "A": [[1, 1]],
//!   "b": [1],
//!   "objective_labels": ["F1", "..."],
//!   "provenance": "optional free text"
//! }
//! ```
//!
//! `Q` holds `p` matrices as nested rows; `c` holds `p` vectors; `A` holds
//! `m` rows. All numbers are decimal literals.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::MoqpInstance;

/// Serialized form of a problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<Vec<f64>>>,
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("document parse: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }
}

/// Validates a document and produces the canonical in-memory instance.
pub fn load_instance(doc: &ProblemDocument) -> Result<MoqpInstance> {
    MoqpInstance::new(
        doc.name.clone(),
        doc.objective_labels.clone(),
        doc.n,
        doc.m,
        doc.p,
        doc.q.clone(),
        doc.c.clone(),
        doc.a.clone(),
        doc.b.clone(),
    )
}

/// Reads and validates a document file in one step.
pub fn load_instance_from_path(path: &Path) -> Result<MoqpInstance> {
    load_instance(&ProblemDocument::from_path(path)?)
}

/// Serializes an instance back into document form. The symmetrized `Q_i`
/// are written, so a round trip through this function is stable.
pub fn to_document(inst: &MoqpInstance) -> ProblemDocument {
    ProblemDocument {
        name: inst.name.clone(),
        n: inst.n,
        m: inst.m,
        p: inst.p,
        q: inst.q.iter().map(|m| m.rows()).collect(),
        c: inst.c.clone(),
        a: inst.a.clone(),
        b: inst.b.clone(),
        objective_labels: inst.objective_labels.clone(),
        provenance: None,
    }
}
