//! JSON shapes emitted with `--json`. Every document is wrapped in an
//! [`Envelope`]; all types deserialize back to the same bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use dimerkit::algebras::{Bounds, CornerComparison, RsReport};
use dimerkit::contraction::{ContractionFile, CyclicVerdict};
use dimerkit::corpus::Fixture;
use dimerkit::criteria::CriteriaReport;
use dimerkit::model::ValidationReport;
use dimerkit::{VertexId, Weight, Winding};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    pub exit_code: i32,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, exit_code: i32, result: T) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            exit_code,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report types serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateResult {
    pub model: String,
    pub vertices: usize,
    pub arrows: usize,
    pub faces: usize,
    pub report: ValidationReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingEntry {
    pub id: usize,
    pub arrows: Vec<String>,
    pub simple: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingsResult {
    pub model: String,
    pub perfect_count: usize,
    pub simple_count: usize,
    pub matchings: Vec<MatchingEntry>,
    /// Arrows in no simple matching.
    pub qs_arrows: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathEntry {
    pub arrows: Vec<String>,
    pub winding: Winding,
    /// Over simple matchings.
    pub tau: Weight,
    /// Over perfect matchings.
    pub eta: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathsResult {
    pub model: String,
    pub from: VertexId,
    pub to: VertexId,
    pub max_len: usize,
    pub winding: Option<Winding>,
    pub paths: Vec<PathEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub model: String,
    pub report: CriteriaReport,
}

/// A monomial as exponents keyed by matching name; zero exponents omitted.
pub type Monomial = BTreeMap<String, u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerEntry {
    pub vertex: VertexId,
    pub generators: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebrasResult {
    pub model: String,
    /// Arrows contracted to obtain the weights; empty for the identity.
    pub contraction: Vec<String>,
    pub contraction_verdict: Option<CyclicVerdict>,
    /// Matching name to its arrows, in the contraction target.
    pub variables: BTreeMap<String, Vec<String>>,
    pub bounds: Bounds,
    pub corners: Vec<CornerEntry>,
    pub corners_equal: bool,
    pub corner_comparison: CornerComparison,
    pub cycle_algebra: Vec<Monomial>,
    pub homotopy_center: Vec<Monomial>,
    pub r_equals_s: RsReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub candidates_tried: usize,
    pub inconclusive: usize,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractResult {
    pub model: String,
    pub contraction: Option<ContractionFile>,
    pub verdict: Option<CyclicVerdict>,
    pub search: Option<SearchSummary>,
    pub target_vertices: Option<usize>,
    pub target_arrows: Option<usize>,
    pub target_faces: Option<usize>,
    /// Arrows removed by 2-cycle reduction of the target.
    pub reduced_arrows: Vec<String>,
    pub written: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusItem {
    pub name: String,
    pub vertices: usize,
    pub arrows: usize,
    pub faces: usize,
    pub fixture: Fixture,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusResult {
    pub entries: Vec<CorpusItem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawResult {
    pub model: String,
    pub format: String,
    pub matching: Option<Vec<String>>,
    pub written: Option<String>,
    pub document: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorResult {
    pub error: String,
}
