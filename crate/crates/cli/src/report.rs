//! The envelope every command prints.

use serde::Serialize;
use serde_json::{json, Value};
use unitrace_core::{FieldElement, FiniteGroup, Gf2nField};

use crate::formats::{canonical_field, field_hash, group_hash};

pub const TOOL: &str = "unitrace";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct GroupStamp {
    pub name: String,
    pub order: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldStamp {
    pub spec: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Budget {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_required: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivalence_candidates: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates_per_search: Option<u128>,
}

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub inputs: Vec<Value>,
    pub budget: Budget,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

pub fn group_stamp(g: &FiniteGroup) -> GroupStamp {
    GroupStamp {
        name: g.name().into(),
        order: g.order(),
        sha256: group_hash(g),
    }
}

pub fn field_stamp(k: &Gf2nField) -> FieldStamp {
    FieldStamp {
        spec: canonical_field(k),
        sha256: field_hash(k),
    }
}

pub fn context(g: &FiniteGroup, k: Option<&Gf2nField>) -> Value {
    match k {
        Some(k) => json!({ "group": group_stamp(g), "field": field_stamp(k) }),
        None => json!({ "group": group_stamp(g) }),
    }
}

/// Coefficients as integers (the bit pattern in the polynomial basis).
pub fn bits(v: &[FieldElement]) -> Vec<u32> {
    v.iter().map(|x| x.bits()).collect()
}
