//! The JSON document printed by every command. Users and slots are 1-based
//! here, unlike the library.

use std::fs;
use std::path::Path;

use altcsit_core::rational::to_f64;
use altcsit_core::{ConstraintTag, CsitPattern, DofPoint, LinearInequality, MarginalProfile, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// A fraction as `"num/den"` (integers without the denominator) plus a
/// decimal rendering for people. Only `exact` is authoritative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exact {
    pub exact: String,
    pub decimal: f64,
}

impl Exact {
    pub fn new(value: &Rational) -> Self {
        Self {
            exact: value.to_string(),
            decimal: to_f64(value),
        }
    }
}

pub fn exact(value: &Rational) -> Value {
    serde_json::to_value(Exact::new(value)).expect("plain struct")
}

pub fn exacts(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(exact).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub command: String,
    /// The full command line, so the run can be repeated.
    pub argv: Vec<String>,
    pub inputs: Value,
    pub results: Value,
    pub seed: Option<u64>,
    pub warnings: Vec<String>,
}

pub fn point(p: &DofPoint) -> Value {
    json!({ "text": p.to_string(), "coords": exacts(p.coords()) })
}

pub fn tag(t: &ConstraintTag) -> Value {
    let users: Vec<usize> = match t {
        ConstraintTag::Box(u) => vec![*u],
        ConstraintTag::Weighted(order) => order.clone(),
        ConstraintTag::Sum(set) => set.clone(),
        ConstraintTag::Pattern { heavy: (a, b) } => vec![*a, *b],
        ConstraintTag::Custom => Vec::new(),
    };
    json!({ "family": t.family(), "users": users.iter().map(|u| u + 1).collect::<Vec<_>>() })
}

pub fn inequality(ineq: &LinearInequality) -> Value {
    json!({
        "text": ineq.to_string(),
        "coeffs": exacts(ineq.coeffs()),
        "rhs": exact(ineq.rhs()),
        "tag": tag(ineq.tag()),
    })
}

pub fn marginals(profile: &MarginalProfile) -> Value {
    Value::Array(
        profile
            .iter()
            .enumerate()
            .map(|(i, m)| {
                json!({
                    "user": i + 1,
                    "perfect": exact(&m.perfect),
                    "delayed": exact(&m.delayed),
                    "not_known": exact(&m.not_known),
                })
            })
            .collect(),
    )
}

pub fn pattern_rows(p: &CsitPattern) -> Vec<String> {
    (0..p.users())
        .map(|u| p.row(u).iter().map(|s| s.symbol()).collect())
        .collect()
}

/// Comma-separated rows with a header line. Cells never contain commas.
pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
