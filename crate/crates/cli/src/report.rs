//! JSON shapes printed by the subcommands. Every rational is an exact
//! `"p/q"` (or `"p"`) string.

use std::collections::BTreeMap;

use alpfeas_core::{CaseDescriptor, Counts, Error, Rational, Verdict};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountsJson {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "P")]
    pub p: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "R")]
    pub r: usize,
    #[serde(rename = "EQ")]
    pub eq: usize,
}

impl From<Counts> for CountsJson {
    fn from(c: Counts) -> Self {
        CountsJson {
            n: c.n,
            p: c.p,
            q: c.q,
            r: c.r,
            eq: c.eq,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CaseJson {
    Empty,
    Single {
        var: String,
        sign: String,
    },
    Pair {
        pair: [usize; 2],
        signs: [String; 2],
    },
}

impl From<&CaseDescriptor> for CaseJson {
    fn from(c: &CaseDescriptor) -> Self {
        match *c {
            CaseDescriptor::Empty => CaseJson::Empty,
            CaseDescriptor::Single(s) => CaseJson::Single {
                var: "f1".into(),
                sign: s.as_str().into(),
            },
            CaseDescriptor::Pair { a, b, signs } => CaseJson::Pair {
                pair: [a, b],
                signs: [signs.0.as_str().into(), signs.1.as_str().into()],
            },
        }
    }
}

pub fn rat(r: &Rational) -> String {
    r.to_string()
}

pub fn point_json(point: &BTreeMap<String, Rational>) -> BTreeMap<String, String> {
    point.iter().map(|(k, v)| (k.clone(), rat(v))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheck {
    /// `null` when the oracle could not run.
    pub verdict: Option<String>,
    pub agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub verdict: String,
    pub case: Option<CaseJson>,
    pub k0: Option<String>,
    pub witness: Option<BTreeMap<String, String>>,
    pub counts: CountsJson,
    pub alp_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub augmented_constraints: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
    pub timing_ms: f64,
}

impl CheckReport {
    pub fn from_verdict(v: &Verdict, counts: Counts, alp_count: usize, timing_ms: f64) -> Self {
        CheckReport {
            verdict: v.status.as_str().into(),
            case: v.feasible_case.as_ref().map(CaseJson::from),
            k0: v.witness.as_ref().map(|w| rat(&w.k0)),
            witness: v.witness.as_ref().map(|w| point_json(&w.point)),
            counts: counts.into(),
            alp_count,
            augmented_constraints: None,
            oracle: None,
            timing_ms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub verdict: String,
    pub witness: Option<BTreeMap<String, String>>,
    pub counts: CountsJson,
    pub oracle_cases: u64,
    pub timing_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifestCase {
    pub index: usize,
    pub file: String,
    pub case: CaseJson,
    pub rows: usize,
    pub variables: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub counts: CountsJson,
    pub original_variables: Vec<String>,
    pub alp_count: usize,
    pub cases: Vec<ManifestCase>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
}

/// Stable snake-case tag for an error, used in reports and CSV rows.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Numeric(_) => "numeric",
        Error::Model(_) => "model",
        Error::Parse(_) => "parse",
        Error::PivotLimit { .. } => "pivot_limit",
        Error::Unbounded => "unbounded",
        Error::WitnessExhausted { .. } => "witness_exhausted",
        Error::UnverifiedReduction { .. } => "unverified_reduction",
        Error::OracleCap { .. } => "oracle_cap",
        Error::ParametricSystem => "parametric_system",
        Error::UnknownVariable(_) => "unknown_variable",
        Error::DuplicateVariable(_) => "duplicate_variable",
        Error::Misuse(_) => "misuse",
    }
}
